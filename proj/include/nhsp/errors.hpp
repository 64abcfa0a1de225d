// SPDX-FileCopyrightText: 2026 the nhsp authors
// SPDX-License-Identifier: MIT

#ifndef NHSP_ERRORS_HPP
#define NHSP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nhsp {

// Base class for everything this library throws on a contract violation.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define NHSP_DEFINE_ERROR(Name)                                       \
    class Name : public Error {                                      \
    public:                                                           \
        explicit Name(const std::string& detail)                     \
            : Error(std::string(#Name) + ": " + detail) {}           \
    }

// Grid resolution must be even (spectral lattice needs a symmetric
// wavenumber range up to the single Nyquist mode).
NHSP_DEFINE_ERROR(OddResolution);

// |k|^s with s < 0 is undefined on a nonzero mean mode.
NHSP_DEFINE_ERROR(NegativePowerAtZeroMode);

// Homogeneous norms exclude k = 0; a field with nonzero mean has no
// well-defined homogeneous norm here.
NHSP_DEFINE_ERROR(HomogeneousNormOnNonzeroMean);

// Requested grid (or all-pairs quadrature) exceeds the configured cap.
NHSP_DEFINE_ERROR(GridTooLarge);

// Deformation-based initial data must satisfy det(A + ∂φ/∂ξ) = 1.
NHSP_DEFINE_ERROR(DeterminantNotOne);

// A field stopped being finite (NaN/Inf or a sup-norm blow-up); the run
// aborts and partial artifacts are kept.
NHSP_DEFINE_ERROR(NonFinite);

// The flow map displacement exceeded L/4 somewhere: on a torus the
// nearest-image interpretation of the map becomes ambiguous.
NHSP_DEFINE_ERROR(MapLeftDomainProxy);

// Newton inversion of the flow map failed to converge.
NHSP_DEFINE_ERROR(InversionDiverged);

// A vorticity bundle was not the curl of any divergence-free field.
NHSP_DEFINE_ERROR(InconsistentVorticity);

// Parameters fall outside an inequality's admissibility window; the
// message names the violated constraint.
NHSP_DEFINE_ERROR(InadmissibleParameters);

// A checkpoint file could not be opened, ended early, or failed structural
// validation (magic, version, section tag, or payload shape).
NHSP_DEFINE_ERROR(CheckpointError);

// A scenario file is unreadable, not valid JSON, or missing required keys.
NHSP_DEFINE_ERROR(ConfigError);

#undef NHSP_DEFINE_ERROR

} // namespace nhsp

#endif // NHSP_ERRORS_HPP
