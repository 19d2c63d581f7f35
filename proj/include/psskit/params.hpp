#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace psskit {

using Rational = mpq_class;
using ParamId = std::uint32_t;

enum class Assumption : std::uint8_t { Real, Nonzero, Positive };

// A radical parameter is a positive (or, for negative c, imaginary) root with
// a fixed quadratic relation:
//   Shift: s^2 = k + m^2 for a base parameter m; normalization rewrites m^2.
//   Const: r^2 = c; normalization reduces the exponent of r mod 2.
enum class RadicalKind : std::uint8_t { None, Shift, Const };

struct ParamInfo {
    std::string name;
    Assumption assumption = Assumption::Real;
    RadicalKind radical = RadicalKind::None;
    ParamId base = 0;
    Rational value;  // k for Shift, c for Const

    bool nonzero() const { return assumption != Assumption::Real; }
    bool positive() const { return assumption == Assumption::Positive; }
};

ParamId declare_param(const std::string& name, Assumption a = Assumption::Real);
ParamId declare_radical_shift(const std::string& name, ParamId base, const Rational& k);
ParamId declare_radical_const(const std::string& name, const Rational& c);

std::optional<ParamId> find_param(const std::string& name);
ParamInfo param_info(ParamId id);
const std::string& param_name(ParamId id);
std::optional<ParamId> radical_of_base(ParamId base);
std::size_t param_count();

bool valid_param_name(const std::string& name);

// Lock-free reads from a per-thread snapshot of the registry; declarations
// are immutable, so the snapshot only needs refreshing when it grows.
const ParamInfo& param_info_fast(ParamId id);
const ParamInfo* radical_info_of_base_fast(ParamId base, ParamId* radical_id);

}  // namespace psskit
