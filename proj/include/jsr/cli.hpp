#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "jsr/certificates.hpp"
#include "jsr/jsr_bounds.hpp"
#include "jsr/ultrametric.hpp"

/// Input documents, built-in example families, reports and the jsrtool
/// command line.
namespace jsr::cli {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr int kFormat = 1;

enum class Field { Complex, RationalPadic };

/// One matrix set on disk. Exactly one of complex_members and
/// rational_members is populated, according to field.
struct InputDocument {
    std::size_t dim = 0;
    Field field = Field::Complex;
    std::uint64_t prime = 0;
    std::vector<Matrix> complex_members;
    std::vector<padic::RationalMatrix> rational_members;
    std::vector<std::string> labels;
    /// Free-form provenance (family, seed, samples, caveat).
    nlohmann::json metadata = nlohmann::json::object();

    std::size_t size() const
    {
        return field == Field::Complex ? complex_members.size() : rational_members.size();
    }
};

/// Throws Error(ParseError) naming the offending field, or the byte
/// offset for malformed text.
InputDocument parse_document(std::string_view text);
/// Canonical text form; parse_document(emit_document(d)) emits identically.
std::string emit_document(const InputDocument& doc);

MatrixSet to_matrix_set(const InputDocument& doc, const Limits& limits = {});
padic::PAdicMatrixSet to_padic_set(const InputDocument& doc, const Limits& limits = {});

/// FNV-1a 64-bit digest, hex encoded.
std::string digest(std::string_view bytes);

struct FamilyParams {
    std::size_t dim = 2;
    /// eps-identity scale.
    double eps = 0.5;
    std::uint64_t seed = 1;
    /// Sampled unitaries for the unitary families.
    int samples = 8;
    /// Emit as a rational document over Q_p (rational families only).
    std::optional<std::uint64_t> prime;
};

std::vector<std::string> family_names();
/// elementary | shift | unitary-mix | eps-identity | unipotent-pair.
InputDocument make_family(std::string_view name, const FamilyParams& params,
                          const Limits& limits = {});

struct RunConfig {
    int depth = 8;
    NormKind norm = NormKind::Spectral;
    std::string theorem = "polbd";
    double eps = 0.25;
    std::optional<std::uint64_t> prime;
    std::uint64_t seed = 1;
    std::uint64_t cap = Limits{}.enumeration_cap;
    bool conjugate = false;
    bool barabanov = false;
    bool depth_given = false;

    Limits limits() const;
    nlohmann::json to_json(std::string_view command) const;
};

struct RunReport {
    nlohmann::json record;
    int exit_code = 0;

    /// The record without wall time; equal across reruns with equal
    /// input, config and seed.
    nlohmann::json reproducible() const;
};

RunReport cmd_estimate(const InputDocument& doc, const RunConfig& config);
RunReport cmd_certify(const InputDocument& doc, const RunConfig& config);
RunReport cmd_padic(const InputDocument& doc, const RunConfig& config);

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kInconclusive = 2,
    kRefuted = 3,
    kBudget = 4,
};

int exit_code_for(Verdict v);

/// The jsrtool entry point. Reports go to out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace jsr::cli
