// qfol: exact computations with polynomial singular foliations — involutivity
// checks, syzygy resolutions, bracket structures on resolutions, free-cell
// replacements and their comparison, plus artifact verification.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qfol/session.hpp"

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact semi-model machinery for polynomial singular foliations"};
    app.require_subcommand(1);

    std::string input_path, out_path;
    qfol::SessionConfig cfg;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("input", input_path, "session or artifact file")->required();
        cmd->add_option("--out", out_path, "write the report to a file as well");
    };

    CLI::App* check = app.add_subcommand("check", "certify involutivity");
    add_common(check);

    CLI::App* resolve = app.add_subcommand("resolve", "free resolution by syzygies");
    add_common(resolve);
    resolve->add_option("--length", cfg.length, "resolution length");

    CLI::App* universal =
        app.add_subcommand("universal", "bracket structure on the resolution");
    add_common(universal);
    universal->add_option("--length", cfg.length, "resolution length");
    universal->add_option("--max-arity", cfg.max_arity, "largest bracket arity");
    universal->add_option("--bound-degree", cfg.bound_degree, "degree bound");

    CLI::App* replace = app.add_subcommand("replace", "free-cell replacement");
    add_common(replace);
    replace->add_option("--bound-weight", cfg.bound_weight, "word weight bound");
    replace->add_option("--bound-degree", cfg.bound_degree, "degree bound");

    CLI::App* compare =
        app.add_subcommand("compare", "compare two independently built replacements");
    add_common(compare);
    compare->add_option("--bound-weight", cfg.bound_weight, "word weight bound");
    compare->add_option("--bound-degree", cfg.bound_degree, "degree bound");

    CLI::App* verify = app.add_subcommand("verify", "re-run all checks on an artifact");
    add_common(verify);

    CLI11_PARSE(app, argc, argv);

    for (CLI::App* sub : {check, resolve, universal, replace, compare, verify})
        if (sub->parsed())
            cfg.command = sub->get_name();

    try {
        qfol::RunResult r = qfol::run_command(cfg, read_file(input_path));
        std::cout << r.report;
        if (!out_path.empty()) {
            std::ofstream out(out_path, std::ios::binary);
            out << r.report;
        }
        return r.exit_status;
    } catch (const qfol::ParseError& e) {
        std::cerr << input_path << ":" << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
