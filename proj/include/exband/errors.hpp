#ifndef EXBAND_ERRORS_HPP
#define EXBAND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace exband {

// Invalid experiment description: bad keys, impossible band geometry,
// too few trials for a requested quantile. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A statistic or probability came out non-finite. Maps to CLI exit code 2.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace exband

#endif  // EXBAND_ERRORS_HPP
