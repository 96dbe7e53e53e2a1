#include <chrono>
#include <cmath>

#include "jsr/cli.hpp"

namespace jsr::cli {

using nlohmann::json;

namespace {

NormSpec norm_spec(NormKind kind)
{
    switch (kind) {
    case NormKind::MaxRowSum: return NormSpec::max_row_sum();
    case NormKind::MaxColSum: return NormSpec::max_col_sum();
    default: return NormSpec::spectral();
    }
}

json word_json(const Word& w)
{
    return w.to_string();
}

json interval_json(const JsrInterval& iv)
{
    return {{"lower", iv.lower},
            {"upper", iv.upper},
            {"width", iv.width()},
            {"certified_lower", iv.certified_lower()},
            {"certified_upper", iv.certified_upper()},
            {"lower_witness", word_json(iv.lower_witness)},
            {"upper_depth", iv.upper_depth},
            {"norm", iv.norm_used.name()},
            {"diagnostics", iv.diagnostics}};
}

json theorem_json(const TheoremReport& r)
{
    json witnesses = json::array();
    for (const auto& w : r.witnesses)
        witnesses.push_back(word_json(w));
    return {{"theorem", to_string(r.theorem)},
            {"verdict", to_string(r.verdict)},
            {"lhs", r.lhs},
            {"rhs_at_lower", r.rhs_at_lower},
            {"rhs_at_upper", r.rhs_at_upper},
            {"witnesses", witnesses},
            {"constants", r.constants},
            {"budget", r.budget},
            {"notes", r.notes}};
}

json magnitude_json(const padic::PAdicMagnitude& m, std::uint64_t p)
{
    if (m.is_bottom())
        return {{"zero", true}, {"prime", p}, {"exponent", nullptr}, {"value", "0"}};
    return {{"zero", false},
            {"prime", p},
            {"exponent", padic::format_rational(m.exponent())},
            {"value", std::to_string(p) + "^(" + padic::format_rational(-m.exponent()) + ")"}};
}

class Stopwatch {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

RunReport finish(std::string_view command, const InputDocument& doc, const RunConfig& config,
                 json results, std::vector<std::string> warnings, int exit_code,
                 const Stopwatch& clock)
{
    RunReport r;
    r.exit_code = exit_code;
    r.record = {{"tool", "jsrtool"},
                {"version", std::string(kVersion)},
                {"command", std::string(command)},
                {"input_digest", digest(emit_document(doc))},
                {"seed", config.seed},
                {"config", config.to_json(command)},
                {"results", std::move(results)},
                {"warnings", std::move(warnings)},
                {"wall_time_s", clock.seconds()}};
    return r;
}

EstimateConfig estimate_config(const RunConfig& config)
{
    EstimateConfig ec;
    ec.depth = config.depth;
    ec.norm = norm_spec(config.norm);
    ec.limits = config.limits();
    return ec;
}

} // namespace

Limits RunConfig::limits() const
{
    Limits l;
    l.enumeration_cap = cap;
    return l;
}

json RunConfig::to_json(std::string_view command) const
{
    json j = {{"depth", depth}, {"norm", norm_spec(norm).name()}, {"cap", cap}, {"seed", seed}};
    if (command == "estimate") {
        j["conjugate"] = conjugate;
        j["barabanov"] = barabanov;
    } else if (command == "certify") {
        j["theorem"] = theorem;
        j["eps"] = eps;
    } else if (command == "padic") {
        j.erase("norm");
        j["depth"] = depth_given ? json(depth) : json(nullptr);
        j["prime"] = prime ? json(*prime) : json(nullptr);
    }
    return j;
}

json RunReport::reproducible() const
{
    json copy = record;
    copy.erase("wall_time_s");
    return copy;
}

int exit_code_for(Verdict v)
{
    switch (v) {
    case Verdict::Confirmed: return kOk;
    case Verdict::Inconclusive: return kInconclusive;
    case Verdict::Refuted: return kRefuted;
    }
    return kUsage;
}

RunReport cmd_estimate(const InputDocument& doc, const RunConfig& config)
{
    const Stopwatch clock;
    const MatrixSet s = to_matrix_set(doc, config.limits());
    const JsrInterval iv = jsr_estimate(s, estimate_config(config));
    json results = {{"interval", interval_json(iv)}};
    std::vector<std::string> warnings = s.warnings();
    if (doc.metadata.contains("caveat"))
        warnings.push_back(doc.metadata["caveat"].get<std::string>());

    if (config.conjugate) {
        const auto c = conjugation_search(s, 500);
        results["conjugation"] = {{"initial", c.initial}, {"value", c.value}};
    }
    if (config.barabanov) {
        const double rho_hat = 0.5 * (iv.lower + iv.upper);
        if (rho_hat > 0.0) {
            BarabanovOptions bo;
            bo.seed = config.seed;
            bo.limits = config.limits();
            const auto p = barabanov_approx(s, rho_hat, std::min(config.depth, 4), bo);
            results["barabanov"] = {{"rho_hat", p.rho_hat()},
                                    {"depth", p.depth()},
                                    {"vertices", p.scaled_products().size()},
                                    {"slack", p.slack()},
                                    {"deficit", p.deficit()}};
        } else {
            warnings.push_back("barabanov norm skipped: interval midpoint is 0");
        }
    }
    int code = kOk;
    if (iv.diagnostics.count("budget_clamped") && iv.diagnostics.at("budget_clamped") > 0.0) {
        warnings.push_back("enumeration cap reached at depth " +
                           std::to_string(static_cast<int>(iv.diagnostics.at("depth_reached"))) +
                           "; the interval is partial (raise --cap or lower --depth)");
        code = kBudget;
    }
    return finish("estimate", doc, config, std::move(results), std::move(warnings), code, clock);
}

RunReport cmd_certify(const InputDocument& doc, const RunConfig& config)
{
    const Stopwatch clock;
    const MatrixSet s = to_matrix_set(doc, config.limits());
    const JsrInterval iv = jsr_estimate(s, estimate_config(config));
    CheckOptions co;
    co.limits = config.limits();
    TheoremReport report;
    if (config.theorem == "polbd") {
        report = check_polbd(s, iv, co);
    } else if (config.theorem == "boca") {
        report = check_boca_new(s, norm_spec(config.norm), iv, co);
    } else if (config.theorem == "bgel") {
        BgElOptions bo;
        bo.seed = config.seed;
        bo.check = co;
        report = check_bg_el(s, iv, config.eps, bo);
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown theorem \"" + config.theorem + "\"");
    }
    std::vector<std::string> warnings = s.warnings();
    if (doc.metadata.contains("caveat"))
        warnings.push_back(doc.metadata["caveat"].get<std::string>());
    json results = {{"interval", interval_json(iv)}, {"theorem", theorem_json(report)}};
    return finish("certify", doc, config, std::move(results), std::move(warnings),
                  exit_code_for(report.verdict), clock);
}

RunReport cmd_padic(const InputDocument& doc, const RunConfig& config)
{
    const Stopwatch clock;
    InputDocument effective = doc;
    if (config.prime && doc.field == Field::RationalPadic)
        effective.prime = *config.prime;
    const auto s = to_padic_set(effective, config.limits());
    padic::PAdicOptions po;
    po.limits = config.limits();
    if (config.depth_given)
        po.max_length = config.depth;

    const auto boca = padic::check_ultra_boca(s, po);
    const bool nilpotent = padic::padic_nilpotency_exact(s);
    const int ell = padic::ell_bound(static_cast<int>(s.dim()));
    const int length = po.max_length.value_or(ell);

    std::vector<std::string> warnings;
    if (length < ell)
        warnings.push_back("max length " + std::to_string(length) + " is below l(d) = " +
                           std::to_string(ell) + "; rho is only a lower bound");
    const bool consistent = nilpotent == boca.rho.is_bottom() || length < ell;
    if (!consistent)
        warnings.push_back("nilpotency flag disagrees with rho = 0");

    json results = {
        {"prime", s.prime()},
        {"ell", ell},
        {"max_length", length},
        {"rho", magnitude_json(boca.rho, s.prime())},
        {"rho_witness", word_json(boca.rho_witness)},
        {"nilpotent", nilpotent},
        {"ultrametric_boca",
         {{"lhs", magnitude_json(boca.lhs, s.prime())},
          {"set_norm", magnitude_json(boca.set_norm, s.prime())},
          {"rhs", magnitude_json(boca.rhs, s.prime())},
          {"extremal", word_json(boca.extremal)},
          {"verdict", to_string(boca.holds ? Verdict::Confirmed : Verdict::Refuted)}}}};
    const int code = boca.holds && consistent ? kOk : kRefuted;
    return finish("padic", effective, config, std::move(results), std::move(warnings), code, clock);
}

} // namespace jsr::cli
