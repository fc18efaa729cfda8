#include "berrytop/errors.hpp"

namespace berrytop {

Branch branch_from_int(int value) {
    if (value == 1) return Branch::Aligned;
    if (value == -1) return Branch::AntiAligned;
    throw InvalidArgument("branch must be +1 or -1, got " + std::to_string(value));
}

const char* to_string(Chart chart) { return chart == Chart::North ? "north" : "south"; }
const char* to_string(Space space) { return space == Space::B ? "B" : "K"; }

ParseError::ParseError(const std::string& message, std::size_t position, std::string component)
    : Error(format(message, position, component)),
      message_(message),
      position_(position),
      component_(std::move(component)) {}

std::string ParseError::format(const std::string& message, std::size_t position, const std::string& component) {
    std::string out;
    if (!component.empty()) out += component + ": ";
    out += message + " (at byte " + std::to_string(position) + ")";
    return out;
}

void ParseError::rethrow_with_component(const std::string& component) const {
    throw ParseError(message_, position_, component);
}
void LexError::rethrow_with_component(const std::string& component) const {
    throw LexError(message(), position(), component);
}
void SyntaxError::rethrow_with_component(const std::string& component) const {
    throw SyntaxError(message(), position(), component);
}
void EvalError::rethrow_with_component(const std::string& component) const {
    throw EvalError(message(), position(), component);
}

NameError::NameError(std::string identifier, std::size_t position, std::string component)
    : ParseError("unknown identifier '" + identifier + "'", position, std::move(component)),
      identifier_(std::move(identifier)) {}

void NameError::rethrow_with_component(const std::string& component) const {
    throw NameError(identifier_, position(), component);
}

}  // namespace berrytop
