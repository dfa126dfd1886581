#include "metricat/extrat.hpp"

#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "metricat/errors.hpp"

namespace metricat {

namespace {

__extension__ typedef __int128 Wide;
__extension__ typedef unsigned __int128 UWide;

UWide gcd_wide(UWide a, UWide b) {
  while (b != 0) {
    UWide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr Wide kInt64Max = std::numeric_limits<std::int64_t>::max();

bool fits(Wide v) { return v >= 0 && v <= kInt64Max; }

ExtRat::BigInt to_big(Wide v) {
  // v is nonnegative in every call site.
  auto u = static_cast<UWide>(v);
  ExtRat::BigInt hi = static_cast<std::uint64_t>(u >> 64);
  ExtRat::BigInt lo = static_cast<std::uint64_t>(u);
  return (hi << 64) | lo;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

ExtRat::ExtRat(std::int64_t value) : num_(value) {
  if (value < 0) throw std::domain_error("ExtRat: negative value");
}

ExtRat ExtRat::ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("ExtRat: zero denominator");
  if ((num < 0) != (den < 0) && num != 0) throw std::domain_error("ExtRat: negative value");
  Wide n = num, d = den;
  if (n < 0) n = -n;
  if (d < 0) d = -d;
  Wide g = static_cast<Wide>(gcd_wide(static_cast<UWide>(n), static_cast<UWide>(d)));
  ExtRat r;
  r.num_ = static_cast<std::int64_t>(n / g);
  r.den_ = static_cast<std::int64_t>(d / g);
  return r;
}

ExtRat ExtRat::ratio(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("ExtRat: zero denominator");
  if (num < 0 || den < 0) {
    if (!(num < 0 && den < 0)) {
      if (num != 0) throw std::domain_error("ExtRat: negative value");
    }
  }
  BigInt n = abs(num), d = abs(den);
  BigInt g = gcd(n, d);
  return from_reduced_big(n / g, d / g);
}

ExtRat ExtRat::from_reduced_big(BigInt num, BigInt den) {
  ExtRat r;
  if (num <= kInt64Max && den <= kInt64Max) {
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }
  r.kind_ = Kind::Big;
  r.num_ = 0;
  r.den_ = 1;
  r.big_ = std::make_shared<const BigRep>(BigRep{std::move(num), std::move(den)});
  return r;
}

ExtRat ExtRat::inf() noexcept {
  ExtRat r;
  r.kind_ = Kind::Inf;
  return r;
}

ExtRat ExtRat::parse(std::string_view text) {
  bool canonical = true;
  return parse(text, canonical);
}

ExtRat ExtRat::parse(std::string_view text, bool& canonical) {
  ExtRat value;
  if (text == "inf") {
    value = inf();
  } else {
    auto slash = text.find('/');
    std::string_view num_text = text.substr(0, slash);
    std::string_view den_text = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!all_digits(num_text) || !all_digits(den_text)) {
      throw ParseError("not an extended rational: \"" + std::string(text) + "\"");
    }
    BigInt num{std::string(num_text)};
    BigInt den{std::string(den_text)};
    if (den == 0) throw ParseError("zero denominator: \"" + std::string(text) + "\"");
    value = ratio(num, den);
  }
  canonical = value.to_string() == text;
  return value;
}

bool ExtRat::is_integer() const {
  switch (kind_) {
    case Kind::Small: return den_ == 1;
    case Kind::Big: return big_->den == 1;
    case Kind::Inf: return false;
  }
  return false;
}

ExtRat::BigInt ExtRat::numerator() const {
  switch (kind_) {
    case Kind::Small: return BigInt(num_);
    case Kind::Big: return big_->num;
    case Kind::Inf: break;
  }
  throw std::domain_error("ExtRat: numerator of INF");
}

ExtRat::BigInt ExtRat::denominator() const {
  switch (kind_) {
    case Kind::Small: return BigInt(den_);
    case Kind::Big: return big_->den;
    case Kind::Inf: break;
  }
  throw std::domain_error("ExtRat: denominator of INF");
}

std::string ExtRat::to_string() const {
  switch (kind_) {
    case Kind::Inf: return "inf";
    case Kind::Small:
      return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    case Kind::Big:
      return big_->den == 1 ? big_->num.str() : big_->num.str() + "/" + big_->den.str();
  }
  return {};
}

ExtRat operator+(const ExtRat& a, const ExtRat& b) {
  using Kind = ExtRat::Kind;
  if (a.kind_ == Kind::Inf || b.kind_ == Kind::Inf) return ExtRat::inf();
  if (a.kind_ == Kind::Small && b.kind_ == Kind::Small) {
    if (b.num_ == 0) return a;
    if (a.num_ == 0) return b;
    if (a.den_ == b.den_) {
      Wide n = static_cast<Wide>(a.num_) + b.num_;
      if (a.den_ == 1 && fits(n)) {
        ExtRat r;
        r.num_ = static_cast<std::int64_t>(n);
        return r;
      }
      Wide d = a.den_;
      Wide g = static_cast<Wide>(gcd_wide(static_cast<UWide>(n), static_cast<UWide>(d)));
      n /= g;
      d /= g;
      if (fits(n)) {
        ExtRat r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
      }
      return ExtRat::from_reduced_big(to_big(n), to_big(d));
    }
    Wide n = static_cast<Wide>(a.num_) * b.den_ + static_cast<Wide>(b.num_) * a.den_;
    Wide d = static_cast<Wide>(a.den_) * b.den_;
    Wide g = static_cast<Wide>(gcd_wide(static_cast<UWide>(n), static_cast<UWide>(d)));
    n /= g;
    d /= g;
    if (fits(n) && fits(d)) {
      ExtRat r;
      r.num_ = static_cast<std::int64_t>(n);
      r.den_ = static_cast<std::int64_t>(d);
      return r;
    }
    return ExtRat::from_reduced_big(to_big(n), to_big(d));
  }
  ExtRat::BigInt n = a.numerator() * b.denominator() + b.numerator() * a.denominator();
  ExtRat::BigInt d = a.denominator() * b.denominator();
  ExtRat::BigInt g = gcd(n, d);
  return ExtRat::from_reduced_big(n / g, d / g);
}

ExtRat ExtRat::times(std::int64_t k) const {
  if (k < 0) throw std::domain_error("ExtRat: negative factor");
  if (k == 0) return ExtRat();
  if (kind_ == Kind::Inf) return inf();
  if (kind_ == Kind::Small) {
    Wide n = static_cast<Wide>(num_) * k;
    Wide d = den_;
    Wide g = static_cast<Wide>(gcd_wide(static_cast<UWide>(n), static_cast<UWide>(d)));
    n /= g;
    d /= g;
    if (fits(n)) {
      ExtRat r;
      r.num_ = static_cast<std::int64_t>(n);
      r.den_ = static_cast<std::int64_t>(d);
      return r;
    }
    return from_reduced_big(to_big(n), to_big(d));
  }
  return ratio(big_->num * k, big_->den);
}

std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b) {
  using Kind = ExtRat::Kind;
  if (a.kind_ == Kind::Inf || b.kind_ == Kind::Inf) {
    return (a.kind_ == Kind::Inf) <=> (b.kind_ == Kind::Inf);
  }
  if (a.kind_ == Kind::Small && b.kind_ == Kind::Small) {
    if (a.den_ == b.den_) return a.num_ <=> b.num_;
    Wide lhs = static_cast<Wide>(a.num_) * b.den_;
    Wide rhs = static_cast<Wide>(b.num_) * a.den_;
    return lhs < rhs ? std::strong_ordering::less
                     : (lhs > rhs ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  ExtRat::BigInt lhs = a.numerator() * b.denominator();
  ExtRat::BigInt rhs = b.numerator() * a.denominator();
  return lhs < rhs ? std::strong_ordering::less
                   : (lhs > rhs ? std::strong_ordering::greater : std::strong_ordering::equal);
}

bool operator==(const ExtRat& a, const ExtRat& b) {
  using Kind = ExtRat::Kind;
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Kind::Inf: return true;
    case Kind::Small: return a.num_ == b.num_ && a.den_ == b.den_;
    case Kind::Big: return a.big_->num == b.big_->num && a.big_->den == b.big_->den;
  }
  return false;
}

std::size_t ExtRat::hash() const noexcept {
  switch (kind_) {
    case Kind::Inf: return 0x9e3779b97f4a7c15ULL;
    case Kind::Small: {
      std::size_t h = std::hash<std::int64_t>{}(num_);
      return h ^ (std::hash<std::int64_t>{}(den_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
    case Kind::Big: return std::hash<std::string>{}(to_string());
  }
  return 0;
}

std::ostream& operator<<(std::ostream& os, const ExtRat& value) { return os << value.to_string(); }

}  // namespace metricat
