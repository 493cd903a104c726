#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace urllc {

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// traffic
class NoMatchingClass : public Error { public: using Error::Error; };
class UnknownPreset : public Error { public: using Error::Error; };

// radio
class NoFeasibleNumerology : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };
class NonPositiveGain : public Error { public: using Error::Error; };

// rrc
class IllegalTransition : public Error { public: using Error::Error; };
class PoolExhausted : public Error { public: using Error::Error; };

// rrm
class Infeasible : public Error { public: using Error::Error; };
class InvalidSplit : public Error { public: using Error::Error; };

// scenario / engine
class ParseError : public Error
{
public:
  ParseError(int line, int column, const std::string& what)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what)
    , m_line{line}
    , m_column{column}
  {}

  int line() const noexcept { return m_line; }
  int column() const noexcept { return m_column; }

private:
  int m_line;
  int m_column;
};

class ValidationError : public Error
{
public:
  explicit ValidationError(std::vector<std::string> violations)
    : Error(join(violations))
    , m_violations{std::move(violations)}
  {}

  const std::vector<std::string>& violations() const noexcept { return m_violations; }

private:
  static std::string join(const std::vector<std::string>& v)
  {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty())
        out += "; ";
      out += s;
    }
    return out;
  }

  std::vector<std::string> m_violations;
};

class ScenarioInvalid : public Error { public: using Error::Error; };

} // namespace urllc
