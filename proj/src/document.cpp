#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "jsr/cli.hpp"

namespace jsr::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what)
{
    throw Error(ErrorCode::ParseError, where + ": " + what);
}

std::string field_name(Field f)
{
    return f == Field::Complex ? "complex" : "rational_padic";
}

const json& require(const json& doc, const char* key)
{
    const auto it = doc.find(key);
    if (it == doc.end())
        fail(key, "missing");
    return *it;
}

std::uint64_t positive_integer(const json& v, const std::string& where)
{
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0)
        fail(where, "expected a positive integer");
    return v.get<std::uint64_t>();
}

double finite_number(const json& v, const std::string& where)
{
    if (!v.is_number())
        fail(where, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        fail(where, "not finite");
    return x;
}

} // namespace

InputDocument parse_document(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
        const auto before = text.substr(0, byte == 0 ? 0 : byte - 1);
        const auto line = 1 + std::count(before.begin(), before.end(), '\n');
        const auto last_newline = before.rfind('\n');
        const auto column = last_newline == std::string_view::npos ? before.size() + 1
                                                                   : before.size() - last_newline;
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " +
                                               std::to_string(column) + ": malformed document");
    }
    if (!doc.is_object())
        fail("document", "expected an object");
    static const std::set<std::string> known{"format", "field", "dim",   "prime",
                                             "members", "labels", "metadata"};
    for (const auto& [key, value] : doc.items())
        if (!known.count(key))
            fail(key, "unknown field");

    const json& format = require(doc, "format");
    if (!format.is_number_integer() || format.get<int>() != kFormat)
        fail("format", "expected " + std::to_string(kFormat));

    InputDocument out;
    const json& field = require(doc, "field");
    if (field == "complex")
        out.field = Field::Complex;
    else if (field == "rational_padic")
        out.field = Field::RationalPadic;
    else
        fail("field", "expected \"complex\" or \"rational_padic\"");

    const std::uint64_t dim = positive_integer(require(doc, "dim"), "dim");
    if (dim > Limits{}.max_dim)
        fail("dim", "exceeds the dimension cap of " + std::to_string(Limits{}.max_dim));
    out.dim = static_cast<std::size_t>(dim);

    if (out.field == Field::RationalPadic) {
        out.prime = positive_integer(require(doc, "prime"), "prime");
        if (!padic::is_prime(out.prime))
            fail("prime", std::to_string(out.prime) + " is not prime");
    } else if (doc.contains("prime")) {
        fail("prime", "only valid with field \"rational_padic\"");
    }

    const json& members = require(doc, "members");
    if (!members.is_array() || members.empty())
        fail("members", "expected a nonempty array");
    for (std::size_t m = 0; m < members.size(); ++m) {
        const std::string at = "members[" + std::to_string(m) + "]";
        const json& rows = members[m];
        if (!rows.is_array() || rows.size() != out.dim)
            fail(at, "expected " + std::to_string(out.dim) + " rows");
        Matrix cm(out.dim, out.dim);
        padic::RationalMatrix rm(out.dim);
        for (std::size_t i = 0; i < out.dim; ++i) {
            const json& row = rows[i];
            const std::string row_at = at + "[" + std::to_string(i) + "]";
            if (!row.is_array() || row.size() != out.dim)
                fail(row_at, "expected " + std::to_string(out.dim) + " entries");
            for (std::size_t j = 0; j < out.dim; ++j) {
                const json& e = row[j];
                const std::string e_at = row_at + "[" + std::to_string(j) + "]";
                if (out.field == Field::Complex) {
                    if (!e.is_array() || e.size() != 2)
                        fail(e_at, "expected a [re, im] pair");
                    cm(i, j) = Complex(finite_number(e[0], e_at + "[0]"),
                                       finite_number(e[1], e_at + "[1]"));
                } else {
                    if (!e.is_string())
                        fail(e_at, "expected a rational string \"a/b\"");
                    try {
                        rm(i, j) = padic::parse_rational(e.get<std::string>());
                    } catch (const Error& err) {
                        fail(e_at, err.what());
                    }
                }
            }
        }
        if (out.field == Field::Complex)
            out.complex_members.push_back(std::move(cm));
        else
            out.rational_members.push_back(std::move(rm));
    }

    if (const auto it = doc.find("labels"); it != doc.end()) {
        if (!it->is_array() || it->size() != members.size())
            fail("labels", "expected one string per member");
        for (const auto& l : *it) {
            if (!l.is_string())
                fail("labels", "expected strings");
            out.labels.push_back(l.get<std::string>());
        }
    }
    if (const auto it = doc.find("metadata"); it != doc.end()) {
        if (!it->is_object())
            fail("metadata", "expected an object");
        out.metadata = *it;
    }
    return out;
}

std::string emit_document(const InputDocument& doc)
{
    std::ostringstream os;
    os << "{\n";
    os << "  \"format\": " << kFormat << ",\n";
    os << "  \"field\": " << json(field_name(doc.field)).dump() << ",\n";
    if (doc.field == Field::RationalPadic)
        os << "  \"prime\": " << doc.prime << ",\n";
    os << "  \"dim\": " << doc.dim << ",\n";
    if (!doc.labels.empty())
        os << "  \"labels\": " << json(doc.labels).dump() << ",\n";
    if (!doc.metadata.empty())
        os << "  \"metadata\": " << doc.metadata.dump() << ",\n";
    os << "  \"members\": [\n";
    for (std::size_t m = 0; m < doc.size(); ++m) {
        json rows = json::array();
        for (std::size_t i = 0; i < doc.dim; ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < doc.dim; ++j) {
                if (doc.field == Field::Complex) {
                    const Complex z = doc.complex_members[m](i, j);
                    row.push_back(json::array({z.real(), z.imag()}));
                } else {
                    row.push_back(padic::format_rational(doc.rational_members[m](i, j)));
                }
            }
            rows.push_back(std::move(row));
        }
        os << "    " << rows.dump() << (m + 1 < doc.size() ? ",\n" : "\n");
    }
    os << "  ]\n}\n";
    return os.str();
}

MatrixSet to_matrix_set(const InputDocument& doc, const Limits& limits)
{
    if (doc.field != Field::Complex)
        throw Error(ErrorCode::InvalidArgument, "this command needs a complex document");
    return MatrixSet(doc.complex_members, limits);
}

padic::PAdicMatrixSet to_padic_set(const InputDocument& doc, const Limits& limits)
{
    if (doc.field != Field::RationalPadic)
        throw Error(ErrorCode::InvalidArgument,
                    "this command needs a rational_padic document (see examples --prime)");
    return padic::PAdicMatrixSet(doc.rational_members, doc.prime, limits);
}

std::string digest(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace jsr::cli
