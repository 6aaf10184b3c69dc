#pragma once

// JSON documents for the module types and CSV tables for sweeps. Reals in
// JSON use the shortest round-trip form; non-finite reals are written as the
// strings "inf", "-inf", "nan". Rationals are "p/q" strings.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "gibbsk/functionals.hpp"
#include "gibbsk/geometry.hpp"
#include "gibbsk/gibbs.hpp"
#include "gibbsk/quantization.hpp"
#include "gibbsk/toric.hpp"
#include "gibbsk/verify.hpp"

namespace gibbsk {

inline constexpr int kDocumentVersion = 1;
std::string library_version();

std::string to_json(const Potential& phi, const PolarizedModel& model);
/// Inverse of to_json(Potential); InputError on schema mismatch. Sets m when non-null.
Potential potential_from_json(const std::string& text, int* m = nullptr);

std::string to_json(const Density& f);
Density density_from_json(const std::string& text, const ReferenceData& ref);

std::string to_json(const SphereQuadrature& q);
std::string to_json(const FunctionalReport& r);
std::string to_json(const ConstantsFit& c);
std::string to_json(const CoercivityReport& r);
/// Row-major [re, im] pairs.
std::string to_json(const GramMatrix& h);
std::string to_json(const MCEstimate& e);
std::string to_json(const GammaEstimate& g);
std::string to_json(const StabilityReport& r);
std::string to_json(const SuiteResult& r);
std::string to_json(const FittedConstantsResult& r);

using CsvCell = std::variant<std::string, double, long long, std::uint64_t>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<CsvCell>> rows;
};

/// RFC 4180 text: CRLF-free, header first, reals with 17 significant digits.
/// InputError when a row length differs from the header.
std::string to_csv(const CsvTable& table);
void emit_sweep(const CsvTable& table, const std::string& path);

/// Columns (gamma, mean, stderr, max_share, diverged).
CsvTable scan_table(const std::vector<MCEstimate>& scan);
/// Columns (seed, k, tau, gamma, lhs, rhs, stderr, margin).
CsvTable gibbs_bound_table(const SuiteResult& r);
/// Columns (seed, J, E, Ent, M, D, margin).
CsvTable functional_table(const std::vector<std::uint64_t>& seeds, const std::vector<FunctionalReport>& reports);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace gibbsk
