#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "rainlink/cli.hpp"

namespace {

void add_common(CLI::App* cmd, rainlink::RunManifest& m) {
    cmd->add_option("--config", m.config_path,
                    "engine config file (key = value)")
        ->envname("RAINLINK_CONFIG");
    cmd->add_option("--stations", m.stations_path, "station registry file");
    cmd->add_option("--forecast", m.forecast_path, "isotherm forecast CSV");
    cmd->add_option("--transit-schedule", m.transit_schedule_path,
                    "sun-transit schedule CSV");
    cmd->add_option("--seed", m.seed, "random seed");
    cmd->add_option("--in", m.input_path, "input file");
    cmd->add_option("--out", m.output_path, "output file");
    cmd->add_option("--truth", m.truth_path, "truth sidecar / reference file");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Opportunistic rain sensing over satellite downlink SNR telemetry"};
    app.require_subcommand(1);

    rainlink::RunManifest m;

    CLI::App* sim = app.add_subcommand(
        "simulate", "generate synthetic telemetry plus a ground-truth sidecar");
    add_common(sim, m);

    CLI::App* proc = app.add_subcommand(
        "process", "run the detection/estimation pipeline over telemetry");
    add_common(proc, m);

    CLI::App* curve = app.add_subcommand(
        "curve", "emit SNR-drop -> rain-rate characteristic tables");
    add_common(curve, m);
    curve->add_option("--h0", m.h0_list_km,
                      "isotherm heights (km), one table block per value");
    curve->add_option("--grid-max", m.grid_max_db, "largest SNR drop (dB)");
    curve->add_option("--grid-step", m.grid_step_db, "grid step (dB)");
    curve->add_option("--station", m.station_id,
                      "station providing elevation/melting thickness");

    CLI::App* cmp = app.add_subcommand(
        "compare", "score an estimates file against truth or a TBRG log");
    add_common(cmp, m);
    cmp->add_option("--station", m.station_id, "station to compare");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? rainlink::kExitOk : rainlink::kExitUsage;
    }

    if (sim->parsed()) return rainlink::cmd_simulate(m);
    if (proc->parsed()) return rainlink::cmd_process(m);
    if (curve->parsed()) return rainlink::cmd_curve(m);
    if (cmp->parsed()) return rainlink::cmd_compare(m);
    return rainlink::kExitUsage;
}
