#include "rrc/rational.hpp"

#include "rrc/error.hpp"

namespace rrc {

std::string to_exact(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string to_decimal(const Rational& q, int places) {
  BigInt scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const bool negative = q < 0;
  const Rational a = negative ? Rational(-q) : q;
  const BigInt num = boost::multiprecision::numerator(a) * scale;
  const BigInt den = boost::multiprecision::denominator(a);
  BigInt scaled = (2 * num + den) / (2 * den);
  BigInt whole = scaled / scale;
  BigInt frac = scaled % scale;
  std::string out = (negative && scaled != 0 ? "-" : "") + whole.str();
  if (places > 0) {
    std::string digits = frac.str();
    out += "." + std::string(places - digits.size(), '0') + digits;
  }
  return out;
}

Rational parse_rational(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      BigInt num(text.substr(0, slash));
      BigInt den(text.substr(slash + 1));
      if (den == 0) fail(ErrorCode::InvalidArgument, "zero denominator in '" + text + "'");
      return Rational(num, den);
    }
    const auto dot = text.find('.');
    if (dot != std::string::npos) {
      std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      if (digits.empty() || digits == "-") fail(ErrorCode::InvalidArgument, "bad number '" + text + "'");
      BigInt den = 1;
      for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
      return Rational(BigInt(digits), den);
    }
    return Rational(BigInt(text));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidArgument, "cannot parse '" + text + "' as a rational");
  }
}

}  // namespace rrc
