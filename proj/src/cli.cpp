#include "mingain/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mingain/document.hpp"
#include "mingain/fusion.hpp"
#include "mingain/infomeasures.hpp"

namespace mingain::cli {

namespace {

struct CombineFlags {
    std::string input;
    std::string rule = "mingain";
    double tol = kDefaultSolverTolerance;
    std::size_t max_iter = kDefaultMaxIterations;
    std::string base = "nats";
    std::string output = "table";
    std::string out_path;
    int precision = 6;
};

std::string read_input(const std::string& path, std::istream& in)
{
    std::ostringstream buf;
    if (path == "-") {
        buf << in.rdbuf();
        return buf.str();
    }
    std::ifstream file(path, std::ios::binary);
    if (!file)
        throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    buf << file.rdbuf();
    return buf.str();
}

std::string fixed(double v, int precision)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, round_to(v, precision));
    return buf;
}

std::string pad(std::string s, std::size_t width)
{
    if (s.size() < width)
        s.append(width - s.size(), ' ');
    return s;
}

int exit_code_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::ConflictDetected:
    case ErrorCode::TotalConflict:
    case ErrorCode::NotFeasible: return kConflict;
    case ErrorCode::NoConvergence: return kNoConvergence;
    default: return kInputError;
    }
}

void write_table(std::ostream& os, const nlohmann::json& doc, int precision)
{
    os << "rule: " << doc["rule"].get<std::string>() << "\n";
    os << "combined bpa:\n";
    auto set_str = [](const nlohmann::json& set) {
        std::string s = "{";
        for (std::size_t k = 0; k < set.size(); ++k)
            s += (k ? "," : "") + set[k].get<std::string>();
        return s + "}";
    };
    for (const auto& e : doc["combined"])
        os << "  " << pad(set_str(e["set"]), 24) << fixed(e["mass"].get<double>(), precision) << "\n";
    os << "belief / plausibility:\n";
    os << "  " << pad("set", 24) << pad("bel", precision + 4) << "pl\n";
    for (const auto& e : doc["belief"])
        os << "  " << pad(set_str(e["set"]), 24) << pad(fixed(e["bel"].get<double>(), precision), precision + 4)
           << fixed(e["pl"].get<double>(), precision) << "\n";
    os << "normalization K: " << fixed(doc["normalization"].get<double>(), precision)
       << "  conflict mass: " << fixed(doc["conflict_mass"].get<double>(), precision) << "\n";
    if (!doc["information"].is_null()) {
        const auto& info = doc["information"];
        os << "information (" << doc["units"].get<std::string>() << "):\n";
        for (const char* key : {"h_left", "h_right", "h_joint", "info_left", "info_right", "info_joint", "gain", "mutual"})
            os << "  " << pad(key, 12) << (info[key].is_null() ? std::string("inf") : fixed(info[key].get<double>(), precision))
               << "\n";
    }
    if (!doc["solver"].is_null()) {
        const auto& s = doc["solver"];
        os << "solver: " << s["method"].get<std::string>() << ", " << s["iterations"].get<std::size_t>()
           << " iterations, residual " << s["residual"].get<double>() << "\n";
    }
}

void emit(const CombineFlags& flags, const std::string& text, std::ostream& out)
{
    if (flags.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(flags.out_path, std::ios::binary);
    if (!file)
        throw Error(ErrorCode::ParseError, "cannot write '" + flags.out_path + "'");
    file << text;
}

int cmd_combine(const CombineFlags& flags, std::istream& in, std::ostream& out, std::ostream& err)
{
    OutputOptions options;
    options.precision = flags.precision;
    options.bits = flags.base == "bits";
    auto rule = *parse_rule(flags.rule);

    auto doc = parse_document(read_input(flags.input, in));

    CombineOptions copts;
    copts.conditionals = resolve_conditionals(doc);
    copts.explicit_joint = resolve_joint_compatibility(doc);
    copts.tol = flags.tol;
    copts.max_iter = flags.max_iter;

    std::vector<BPA> bodies;
    for (const auto& e : doc.evidence)
        bodies.push_back(e.bpa);

    nlohmann::json result;
    int status = kSuccess;
    try {
        result = result_document(combine_all(bodies, rule, copts), options);
    } catch (const Error& e) {
        status = exit_code_for(e.code());
        err << "error: " << e.what() << "\n";
        if (status != kConflict)
            return status;
        result = conflict_document(rule, e, options);
    }

    if (flags.output == "json") {
        emit(flags, result.dump(2) + "\n", out);
    } else if (status == kConflict) {
        std::ostringstream os;
        const auto& c = result["conflict"];
        os << "conflict (" << c["code"].get<std::string>() << "): " << c["message"].get<std::string>() << "\n";
        emit(flags, os.str(), out);
    } else {
        std::ostringstream os;
        write_table(os, result, flags.precision);
        emit(flags, os.str(), out);
    }
    return status;
}

int cmd_inspect(const std::string& input, std::istream& in, std::ostream& out)
{
    auto doc = parse_document(read_input(input, in));
    const int p = 6;
    for (const auto& e : doc.evidence) {
        const auto& bpa = e.bpa;
        out << "evidence '" << e.name << "' (" << bpa.focal_count() << " focal elements)\n";
        out << "  " << pad("focal", 24) << pad("mass", p + 4) << pad("bel", p + 4) << "pl\n";
        for (const auto& fe : bpa.focal())
            out << "  " << pad(fe.set.to_string(), 24) << pad(fixed(fe.mass, p), p + 4)
                << pad(fixed(bel(bpa, fe.set), p), p + 4) << fixed(pl(bpa, fe.set), p) << "\n";
        auto body = abstract_evidence(bpa);
        out << "  abstract frame:\n";
        for (std::size_t s = 0; s < body.frame().size(); ++s)
            out << "    " << body.frame().label(s) << " <=> " << body.relation().targets_of(s).to_string()
                << "  P = " << fixed(body.prob()[s], p) << "\n";
        out << "  entropy " << fixed(entropy(body.prob()), p) << " nats, information "
            << fixed(information(body.prob()), p) << " nats\n";
    }
    return kSuccess;
}

int cmd_validate(const std::string& input, std::istream& in, std::ostream& out)
{
    auto doc = parse_document(read_input(input, in));
    out << "ok: " << doc.evidence.size() << " evidence entries over " << doc.frame.size() << " elements\n";
    return kSuccess;
}

}  // namespace

int run(std::span<const std::string> args, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Combine Dempster-Shafer evidence by minimum information gain, Dempster or Bayes."};
    app.require_subcommand(1);

    CombineFlags flags;
    auto* combine = app.add_subcommand("combine", "combine the evidence in a document");
    combine->add_option("input", flags.input, "evidence document (- for stdin)")->required();
    combine->add_option("--rule", flags.rule, "combination rule")
        ->check(CLI::IsMember({"mingain", "dempster", "bayes"}));
    combine->add_option("--tol", flags.tol, "solver marginal tolerance")->check(CLI::PositiveNumber);
    combine->add_option("--max-iter", flags.max_iter, "solver iteration budget");
    combine->add_option("--base", flags.base, "units for information measures")
        ->check(CLI::IsMember({"nats", "bits"}));
    combine->add_option("--output", flags.output, "output format")->check(CLI::IsMember({"table", "json"}));
    combine->add_option("--out", flags.out_path, "write the result here instead of stdout");
    combine->add_option("--precision", flags.precision, "decimals in printed numbers")->check(CLI::Range(0, 17));

    std::string inspect_input;
    auto* inspect = app.add_subcommand("inspect", "show bpas, belief tables and abstract frames");
    inspect->add_option("input", inspect_input, "evidence document (- for stdin)")->required();

    std::string validate_input;
    auto* validate = app.add_subcommand("validate", "check that a document is well formed");
    validate->add_option("input", validate_input, "evidence document (- for stdin)")->required();

    std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }

    try {
        if (*combine)
            return cmd_combine(flags, in, out, err);
        if (*inspect)
            return cmd_inspect(inspect_input, in, out);
        if (*validate)
            return cmd_validate(validate_input, in, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace mingain::cli
