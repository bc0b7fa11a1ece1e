#include "CLI11.hpp"

#include "qcoalg/cli.hpp"

namespace {

struct FormatOption {
    std::string value;

    void apply(qcoalg::RunConfig& cfg) const {
        if (value.empty()) return;
        cfg.format = value == "json" ? qcoalg::RunConfig::Format::Json
                                     : qcoalg::RunConfig::Format::Csv;
    }
};

void add_common(CLI::App* cmd, qcoalg::RunConfig& cfg, FormatOption& fmt) {
    cmd->add_option("--in", cfg.input_path, "input system file (JSON)")->required();
    cmd->add_option("--out", cfg.output_path, "output path (default: stdout)");
    cmd->add_option("--format", fmt.value, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"model deterministic, probabilistic and quantum systems; compute finite-depth "
                 "behaviour tables and minimal convex realizations"};
    app.require_subcommand(1);

    qcoalg::RunConfig cfg;
    FormatOption fmt;

    auto* behaviour =
        app.add_subcommand("behaviour", "word-indexed observation table of a system");
    behaviour->add_option("--depth", cfg.depth, "maximum word length")->required();
    add_common(behaviour, cfg, fmt);

    auto* simulate = app.add_subcommand("simulate", "step-indexed distribution stream");
    simulate->add_option("--steps", cfg.steps, "number of steps")->required();
    add_common(simulate, cfg, fmt);

    auto* minimize =
        app.add_subcommand("minimize", "minimal affine realization of a quantum behaviour");
    minimize->add_option("--check-depth", cfg.check_depth,
                         "behaviour-equivalence check depth (default: derived from the system)");
    minimize->add_option("--tol", cfg.tol, "rank and recurrence tolerance");
    add_common(minimize, cfg, fmt);

    auto* dfa_min = app.add_subcommand("dfa-min", "minimal deterministic automaton");
    add_common(dfa_min, cfg, fmt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return qcoalg::kExitValidation;
    }

    if (behaviour->parsed()) cfg.command = qcoalg::RunConfig::Command::Behaviour;
    if (simulate->parsed()) cfg.command = qcoalg::RunConfig::Command::Simulate;
    if (minimize->parsed()) cfg.command = qcoalg::RunConfig::Command::Minimize;
    if (dfa_min->parsed()) cfg.command = qcoalg::RunConfig::Command::DfaMin;
    fmt.apply(cfg);

    return qcoalg::run_command(cfg);
}
