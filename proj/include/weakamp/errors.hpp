#pragma once

#include <stdexcept>
#include <string>

namespace weakamp {

// Postselection norm below the relative floor; expectation values undefined.
struct DegenerateNorm : std::runtime_error {
    explicit DegenerateNorm(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside an operation's stated domain.
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Extremal-time condition has no positive solution in the search window.
struct NoRoot : std::runtime_error {
    explicit NoRoot(const std::string& what) : std::runtime_error(what) {}
};

// Conditioning on an event of probability zero (e.g. k = 0 dark port).
struct ZeroProbability : std::runtime_error {
    explicit ZeroProbability(const std::string& what) : std::runtime_error(what) {}
};

// Truncated number basis too small for the requested state/evolution.
struct CutoffTooSmall : std::runtime_error {
    explicit CutoffTooSmall(const std::string& what) : std::runtime_error(what) {}
};

// Fixed-step integrator drifted past its conservation tolerance.
struct StepTooLarge : std::runtime_error {
    explicit StepTooLarge(const std::string& what) : std::runtime_error(what) {}
};

// Config file rejected; carries a line number for diagnostics.
struct ConfigParse : std::runtime_error {
    int line;
    ConfigParse(int line_, const std::string& what)
        : std::runtime_error("config line " + std::to_string(line_) + ": " + what),
          line(line_) {}
};

// Figure name not in the built-in catalog.
struct UnknownFigure : std::invalid_argument {
    explicit UnknownFigure(const std::string& name)
        : std::invalid_argument("unknown figure: " + name) {}
};

}  // namespace weakamp
