#pragma once

#include <filesystem>

#include "nslab/field.hpp"

namespace nslab {

/// NSSF1 field snapshot: magic "NSSF1\0", then little-endian u32 N, f64 L,
/// f64 nu, f64 t, then three coefficient blocks in row-major k order, each
/// entry two f64 (re, im). Round trips are bit-exact.
struct FieldSnapshot {
    SpectralVelocityField field;
    double nu = 0.0;
};

class FormatError : public Error {
  public:
    using Error::Error;
};
class FormatVersionError : public FormatError {
  public:
    using FormatError::FormatError;
};
class TruncatedPayloadError : public FormatError {
  public:
    using FormatError::FormatError;
};

void save_field(const SpectralVelocityField& u, double nu, const std::filesystem::path& path);
FieldSnapshot load_field(const std::filesystem::path& path);

}  // namespace nslab
