#include "densitylab/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace densitylab {

namespace {

std::int64_t parse_int(const std::string& s) {
  if (s.empty()) throw Error(Error::Code::invalid_spec, "empty number");
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw Error(Error::Code::invalid_spec, "bad number: '" + s + "'");
  }
  if (pos != s.size())
    throw Error(Error::Code::invalid_spec, "bad number: '" + s + "'");
  return v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw Error(Error::Code::invalid_spec, "empty rational");

  if (auto slash = s.find('/'); slash != std::string::npos) {
    return Rational::make(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    const std::string whole = s.substr(0, dot);
    const std::string frac = s.substr(dot + 1);
    if (frac.empty()) return Rational(parse_int(whole));
    bool neg = !whole.empty() && whole[0] == '-';
    __int128 num = parse_int(whole.empty() || whole == "-" || whole == "+" ? "0" : whole);
    if (num < 0) num = -num;
    __int128 den = 1;
    for (char ch : frac) {
      if (!std::isdigit(static_cast<unsigned char>(ch)))
        throw Error(Error::Code::invalid_spec, "bad decimal: '" + text + "'");
      num = num * 10 + (ch - '0');
      den *= 10;
      if (den > (static_cast<__int128>(1) << 100))
        throw_overflow("decimal with too many digits: '" + text + "'");
    }
    if (neg) num = -num;
    return Rational::from_i128(num, den);
  }
  return Rational(parse_int(s));
}

}  // namespace densitylab
