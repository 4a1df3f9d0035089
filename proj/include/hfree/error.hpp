#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hfree {

enum class Errc {
    MalformedHeader,
    WrongArity,
    DuplicateVertexInEdge,
    DuplicateEdge,
    VertexOutOfRange,
    EdgeCountMismatch,
    InvalidArgument,
    NontrivialRequired,
    MixedUniformity,
    EmptyFamily,
    SizeCap,
    BudgetExceeded,
    PreconditionFailed,
    ExtractorContractViolation,
    NotIndependentNeighborhoods,
    NotALeaf,
    PlanInfeasible,
    Config,
    Io,
};

constexpr std::string_view to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::WrongArity: return "WrongArity";
    case Errc::DuplicateVertexInEdge: return "DuplicateVertexInEdge";
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::VertexOutOfRange: return "VertexOutOfRange";
    case Errc::EdgeCountMismatch: return "EdgeCountMismatch";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NontrivialRequired: return "NontrivialRequired";
    case Errc::MixedUniformity: return "MixedUniformity";
    case Errc::EmptyFamily: return "EmptyFamily";
    case Errc::SizeCap: return "SizeCap";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::PreconditionFailed: return "PreconditionFailed";
    case Errc::ExtractorContractViolation: return "ExtractorContractViolation";
    case Errc::NotIndependentNeighborhoods: return "NotIndependentNeighborhoods";
    case Errc::NotALeaf: return "NotALeaf";
    case Errc::PlanInfeasible: return "PlanInfeasible";
    case Errc::Config: return "Config";
    case Errc::Io: return "Io";
    }
    return "Unknown";
}

/// Every failure the library reports. `line()` is 1-based and only
/// meaningful for parse errors (0 otherwise).
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what, std::size_t line = 0)
        : std::runtime_error(format(code, what, line)), code_(code), line_(line)
    {
    }

    Errc code() const noexcept { return code_; }
    std::size_t line() const noexcept { return line_; }

private:
    static std::string format(Errc code, const std::string& what, std::size_t line)
    {
        std::string out(to_string(code));
        if (line != 0)
            out += " at line " + std::to_string(line);
        if (!what.empty())
            out += ": " + what;
        return out;
    }

    Errc code_;
    std::size_t line_;
};

} // namespace hfree
