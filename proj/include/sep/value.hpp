// Runtime value universe and execution outcomes shared by the concrete
// interpreter, the symbolic engine and the solver backends. Integer
// division and modulo follow the SMT-LIB2 Int theory (Euclidean): the
// remainder is always non-negative, so the interpreter and any solver
// model agree bit for bit.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace sep {

using Int = boost::multiprecision::cpp_int;

struct Unit {
  friend bool operator==(Unit, Unit) { return true; }
};

using IntArray = std::vector<Int>;

// One of Int | Bool | IntArray | Unit.
class Value {
 public:
  Value() : v_(Unit{}) {}
  explicit Value(Int i) : v_(std::move(i)) {}
  explicit Value(bool b) : v_(b) {}
  explicit Value(IntArray a) : v_(std::move(a)) {}
  static Value unit() { return Value(); }

  bool is_int() const { return std::holds_alternative<Int>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_array() const { return std::holds_alternative<IntArray>(v_); }
  bool is_unit() const { return std::holds_alternative<Unit>(v_); }

  const Int& as_int() const { return std::get<Int>(v_); }
  bool as_bool() const { return std::get<bool>(v_); }
  const IntArray& as_array() const { return std::get<IntArray>(v_); }
  IntArray& as_array() { return std::get<IntArray>(v_); }

  friend bool operator==(const Value& a, const Value& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

  std::string to_string() const;

 private:
  std::variant<Int, bool, IntArray, Unit> v_;
};

enum class ExceptionKind { DivByZero, ModByZero, IndexOutOfBounds, AssertFailed };

const char* exception_kind_name(ExceptionKind k);
// Throws std::invalid_argument on an unrecognized name.
ExceptionKind exception_kind_from_name(const std::string& name);

// Observable result of running a candidate on one input: normal return,
// in-language exception, or budget exhaustion. Final states of array
// parameters are part of the outcome.
struct ExecutionOutcome {
  enum class Kind { Return, Exception, ResourceExhausted };

  Kind kind = Kind::Return;
  Value return_value;                       // meaningful when kind == Return
  ExceptionKind exception = ExceptionKind::DivByZero;  // when kind == Exception
  std::map<std::string, Value> mutated_inputs;  // exactly the array params

  static ExecutionOutcome ret(Value v, std::map<std::string, Value> muts = {});
  static ExecutionOutcome exc(ExceptionKind k, std::map<std::string, Value> muts = {});
  static ExecutionOutcome exhausted();

  std::string to_string() const;
};

// Component-wise equality; ResourceExhausted equals only ResourceExhausted.
bool outcomes_equal(const ExecutionOutcome& a, const ExecutionOutcome& b);

// SMT-LIB2 Int theory division: a = b*q + r with 0 <= r < |b|.
// Callers must rule out b == 0 first.
Int euclid_div(const Int& a, const Int& b);
Int euclid_mod(const Int& a, const Int& b);

}  // namespace sep
