#ifndef RAINLINK_CLI_HPP
#define RAINLINK_CLI_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace rainlink {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;  // usage / configuration error
inline constexpr int kExitData = 2;   // unreadable or inconsistent data

struct RunManifest {
    std::string config_path;
    std::string stations_path;
    std::string forecast_path;
    std::string transit_schedule_path;  // optional
    std::uint64_t seed = 42;
    std::string input_path;
    std::string output_path;
    std::string truth_path;
    // curve
    std::vector<double> h0_list_km;
    double grid_max_db = 10.0;
    double grid_step_db = 0.25;
    // compare
    std::string station_id;
};

int cmd_simulate(const RunManifest& m);
int cmd_process(const RunManifest& m);
int cmd_curve(const RunManifest& m);
int cmd_compare(const RunManifest& m);

}  // namespace rainlink

#endif
