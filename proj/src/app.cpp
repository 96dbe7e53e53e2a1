#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "jsr/cli.hpp"

namespace jsr::cli {

using nlohmann::json;

namespace {

std::string read_input(const std::string& path)
{
    std::ostringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::ParseError, path + ": cannot open");
    buf << in.rdbuf();
    return buf.str();
}

std::string csv_cell(const json& v)
{
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"')
            quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

std::vector<std::pair<std::string, json>> csv_fields(const json& record)
{
    const json& r = record["results"];
    const std::string command = record["command"];
    std::vector<std::pair<std::string, json>> f{{"command", command},
                                                 {"input_digest", record["input_digest"]},
                                                 {"seed", record["seed"]}};
    if (command == "estimate" || command == "certify") {
        const json& iv = r["interval"];
        for (const char* k : {"lower", "upper", "width", "lower_witness", "upper_depth"})
            f.emplace_back(k, iv[k]);
    }
    if (command == "certify") {
        const json& t = r["theorem"];
        for (const char* k : {"theorem", "verdict", "lhs", "rhs_at_lower", "rhs_at_upper"})
            f.emplace_back(k, t[k]);
    }
    if (command == "padic") {
        f.emplace_back("prime", r["prime"]);
        f.emplace_back("rho_exponent", r["rho"]["exponent"]);
        f.emplace_back("rho_witness", r["rho_witness"]);
        f.emplace_back("nilpotent", r["nilpotent"]);
        f.emplace_back("boca_verdict", r["ultrametric_boca"]["verdict"]);
    }
    return f;
}

void append_csv(const std::string& path, const json& record)
{
    const auto fields = csv_fields(record);
    std::error_code ec;
    const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
    std::ofstream out(path, std::ios::app);
    if (!out)
        throw Error(ErrorCode::InvalidArgument, path + ": cannot write CSV");
    auto line = [&](bool header) {
        for (std::size_t i = 0; i < fields.size(); ++i)
            out << (i ? "," : "") << (header ? fields[i].first : csv_cell(fields[i].second));
        out << "\n";
    };
    if (fresh)
        line(true);
    line(false);
}

std::string summary(const json& record)
{
    const json& r = record["results"];
    const std::string command = record["command"];
    std::ostringstream os;
    os << command << ": ";
    if (command == "padic") {
        os << "rho = " << r["rho"]["value"].get<std::string>() << ", nilpotent = "
           << r["nilpotent"] << ", ultrametric bound "
           << r["ultrametric_boca"]["verdict"].get<std::string>();
    } else {
        os << "rho in [" << r["interval"]["lower"] << ", " << r["interval"]["upper"] << "]";
        if (command == "certify")
            os << ", " << r["theorem"]["theorem"].get<std::string>() << " "
               << r["theorem"]["verdict"].get<std::string>();
    }
    return os.str();
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Joint spectral radius bounds, theorem checks and exact p-adic computation",
                 "jsrtool"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    RunConfig config;
    std::string input;
    std::string csv;
    bool quiet = false;
    std::string family;
    FamilyParams family_params;
    std::optional<std::uint64_t> prime;

    const std::map<std::string, NormKind> norms{{"spectral", NormKind::Spectral},
                                                {"rowsum", NormKind::MaxRowSum},
                                                {"colsum", NormKind::MaxColSum}};

    auto common = [&](CLI::App* sub) {
        sub->add_option("input", input, "Input document, or - for standard input")->required();
        sub->add_option("--depth", config.depth, "Product length for the bounds")
            ->check(CLI::Range(1, 64));
        sub->add_option("--seed", config.seed, "Random seed");
        sub->add_option("--cap", config.cap, "Maximum number of enumerated words")
            ->check(CLI::PositiveNumber);
        sub->add_option("--csv", csv, "Append a summary row to this CSV file");
        sub->add_flag("--quiet", quiet, "No summary on standard error");
    };

    auto* estimate = app.add_subcommand("estimate", "Bracket the joint spectral radius");
    common(estimate);
    estimate->add_option("--norm", config.norm, "Operator norm for the upper bound")
        ->transform(CLI::CheckedTransformer(norms, CLI::ignore_case));
    estimate->add_flag("--conjugate", config.conjugate, "Also run the conjugation search");
    estimate->add_flag("--barabanov", config.barabanov, "Also build a polytope extremal norm");

    auto* certify = app.add_subcommand("certify", "Check a theorem inequality on the input");
    common(certify);
    certify->add_option("--theorem", config.theorem, "Inequality to check")
        ->check(CLI::IsMember({"polbd", "boca", "bgel"}));
    certify->add_option("--norm", config.norm, "Operator norm for the boca check")
        ->transform(CLI::CheckedTransformer(norms, CLI::ignore_case));
    certify->add_option("--eps", config.eps, "Tolerance for the bgel check")
        ->check(CLI::Range(0.0, 1.0));

    auto* padic_cmd = app.add_subcommand("padic", "Exact joint spectral radius over Q_p");
    common(padic_cmd);
    padic_cmd->add_option("--prime", prime, "Override the prime of the document");

    auto* examples = app.add_subcommand("examples", "Emit a built-in example family");
    examples->add_option("family", family, "Family name")
        ->required()
        ->check(CLI::IsMember(family_names()));
    examples->add_option("--dim,-d", family_params.dim, "Dimension")->check(CLI::Range(1, 32));
    examples->add_option("--eps", family_params.eps, "Scale for eps-identity");
    examples->add_option("--seed", family_params.seed, "Seed for sampled unitaries");
    examples->add_option("--samples", family_params.samples, "Number of sampled unitaries");
    examples->add_option("--prime", prime, "Emit as a rational document over Q_p");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (examples->parsed()) {
            family_params.prime = prime;
            out << emit_document(make_family(family, family_params));
            return kOk;
        }
        config.depth_given = app.get_subcommands().front()->count("--depth") > 0;
        config.prime = prime;
        const InputDocument doc = parse_document(read_input(input));
        RunReport report;
        if (estimate->parsed())
            report = cmd_estimate(doc, config);
        else if (certify->parsed())
            report = cmd_certify(doc, config);
        else
            report = cmd_padic(doc, config);
        out << report.record.dump(2) << "\n";
        if (!csv.empty())
            append_csv(csv, report.record);
        for (const auto& w : report.record["warnings"])
            err << "jsrtool: warning: " << w.get<std::string>() << "\n";
        if (!quiet)
            err << summary(report.record) << "\n";
        return report.exit_code;
    } catch (const Error& e) {
        err << "jsrtool: " << to_string(e.code()) << ": " << e.what() << "\n";
        if (e.code() == ErrorCode::BudgetExceeded) {
            err << "jsrtool: lower --depth or raise --cap\n";
            return kBudget;
        }
        return kUsage;
    }
}

} // namespace jsr::cli
