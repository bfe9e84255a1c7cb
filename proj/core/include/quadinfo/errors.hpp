#pragma once

#include <stdexcept>
#include <string>

namespace quadinfo {

// A divergence that is infinite because the reference measure vanishes where
// the other one does not.
class SupportMismatchError : public std::domain_error {
public:
    explicit SupportMismatchError(const std::string& what) : std::domain_error(what) {}
};

// A marginal mass (or output marginal of a channel) has a zero entry where a
// strictly positive one is required.
class ZeroMarginalError : public std::domain_error {
public:
    explicit ZeroMarginalError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace quadinfo
