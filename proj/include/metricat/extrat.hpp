#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace metricat {

/// Exact nonnegative rational or +infinity.
///
/// Values are kept in lowest terms with a positive denominator. Fractions
/// whose numerator and denominator fit in 64 bits are stored inline; larger
/// ones spill to an arbitrary-precision representation, so no operation
/// ever rounds.
class ExtRat {
 public:
  using BigInt = boost::multiprecision::cpp_int;

  constexpr ExtRat() noexcept = default;
  /// Nonnegative integer. Throws std::domain_error for negative input.
  ExtRat(std::int64_t value);  // NOLINT(google-explicit-constructor)

  /// num/den reduced. Throws std::domain_error on den == 0 or a negative value.
  static ExtRat ratio(std::int64_t num, std::int64_t den);
  static ExtRat ratio(const BigInt& num, const BigInt& den);
  static ExtRat inf() noexcept;

  /// Accepts "p", "p/q" and "inf". Throws ParseError otherwise.
  static ExtRat parse(std::string_view text);
  /// As parse(); `canonical` is cleared when the text is not the exact
  /// spelling to_string() would produce (e.g. "3/6" or "2/1").
  static ExtRat parse(std::string_view text, bool& canonical);

  bool is_inf() const noexcept { return kind_ == Kind::Inf; }
  bool is_zero() const noexcept { return kind_ == Kind::Small && num_ == 0; }
  bool is_finite() const noexcept { return kind_ != Kind::Inf; }
  bool is_integer() const;

  /// Undefined (throws std::domain_error) for INF.
  BigInt numerator() const;
  BigInt denominator() const;

  /// "p" for integers, "p/q" otherwise, "inf" for INF.
  std::string to_string() const;

  friend ExtRat operator+(const ExtRat& a, const ExtRat& b);
  ExtRat& operator+=(const ExtRat& other) { return *this = *this + other; }
  /// Multiplication by a nonnegative integer; k * INF is INF for k > 0 and 0 for k == 0.
  ExtRat times(std::int64_t k) const;

  friend std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b);
  friend bool operator==(const ExtRat& a, const ExtRat& b);

  std::size_t hash() const noexcept;

 private:
  enum class Kind : std::uint8_t { Small, Big, Inf };
  struct BigRep {
    BigInt num;
    BigInt den;
  };

  static ExtRat from_reduced_big(BigInt num, BigInt den);

  Kind kind_ = Kind::Small;
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const BigRep> big_;
};

inline const ExtRat& min(const ExtRat& a, const ExtRat& b) { return b < a ? b : a; }
inline const ExtRat& max(const ExtRat& a, const ExtRat& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const ExtRat& value);

}  // namespace metricat

template <>
struct std::hash<metricat::ExtRat> {
  std::size_t operator()(const metricat::ExtRat& v) const noexcept { return v.hash(); }
};
