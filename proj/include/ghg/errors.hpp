// Copyright 2026 The ghgkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GHG_ERRORS_HPP
#define GHG_ERRORS_HPP

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ghg {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad configuration, mismatched groups, violated preconditions.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A numerical procedure did not reach the required accuracy.
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// Two computations that must agree did not. Indicates a bug.
class InternalError : public Error {
  public:
    using Error::Error;
};

inline int64_t mod(int64_t a, int64_t m) {
    int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline int64_t mulmod(int64_t a, int64_t b, int64_t m) {
    return static_cast<int64_t>(mod(static_cast<int64_t>((static_cast<__int128>(a) * b) % m), m));
}

/// Inverse of a modulo m; throws if gcd(a, m) != 1.
inline int64_t invmod(int64_t a, int64_t m) {
    int64_t old_r = mod(a, m), r = m, old_s = 1, s = 0;
    while (r != 0) {
        int64_t q = old_r / r;
        int64_t t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1 && m != 1) {
        throw DomainError("invmod: " + std::to_string(a) + " is not a unit modulo " + std::to_string(m));
    }
    return mod(old_s, m);
}

/// Global numerical tolerance. Defaults to 1e-9, overridden by the GHG_TOLERANCE environment variable.
inline double default_tolerance() {
    static const double tol = [] {
        const char *env = std::getenv("GHG_TOLERANCE");
        if (env != nullptr && *env != '\0') {
            char *end = nullptr;
            double v = std::strtod(env, &end);
            if (end != env && v > 0) {
                return v;
            }
        }
        return 1e-9;
    }();
    return tol;
}

}  // namespace ghg

#endif
