#include "daefc/rational.hpp"

#include "daefc/errors.hpp"

namespace daefc {

Rat parse_rational(const std::string& text) {
    if (text.empty())
        throw ParseError("empty rational literal");
    std::string body = text;
    // mpq accepts "p/q" directly but not surrounding whitespace.
    const auto first = body.find_first_not_of(" \t");
    const auto last = body.find_last_not_of(" \t");
    if (first == std::string::npos)
        throw ParseError("blank rational literal");
    body = body.substr(first, last - first + 1);

    mpq_class value;
    if (value.set_str(body, 10) != 0)
        throw ParseError("malformed rational literal: '" + text + "'");
    if (value.get_den() == 0)
        throw ParseError("zero denominator in rational literal: '" + text + "'");
    value.canonicalize();
    return value;
}

std::string to_string(const Rat& value) {
    return value.get_str();
}

double to_double(const Rat& value) {
    return value.get_d();
}

} // namespace daefc
