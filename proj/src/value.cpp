#include "sep/value.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>

namespace sep {

std::string Value::to_string() const {
  if (is_int()) return as_int().str();
  if (is_bool()) return as_bool() ? "true" : "false";
  if (is_unit()) return "unit";
  std::ostringstream os;
  os << "[";
  const auto& a = as_array();
  for (size_t i = 0; i < a.size(); ++i) {
    if (i) os << ", ";
    os << a[i].str();
  }
  os << "]";
  return os.str();
}

const char* exception_kind_name(ExceptionKind k) {
  switch (k) {
    case ExceptionKind::DivByZero: return "div_by_zero";
    case ExceptionKind::ModByZero: return "mod_by_zero";
    case ExceptionKind::IndexOutOfBounds: return "index_out_of_bounds";
    case ExceptionKind::AssertFailed: return "assert_failed";
  }
  return "?";
}

ExceptionKind exception_kind_from_name(const std::string& name) {
  if (name == "div_by_zero") return ExceptionKind::DivByZero;
  if (name == "mod_by_zero") return ExceptionKind::ModByZero;
  if (name == "index_out_of_bounds") return ExceptionKind::IndexOutOfBounds;
  if (name == "assert_failed") return ExceptionKind::AssertFailed;
  throw std::invalid_argument("unknown exception kind: " + name);
}

ExecutionOutcome ExecutionOutcome::ret(Value v, std::map<std::string, Value> muts) {
  ExecutionOutcome o;
  o.kind = Kind::Return;
  o.return_value = std::move(v);
  o.mutated_inputs = std::move(muts);
  return o;
}

ExecutionOutcome ExecutionOutcome::exc(ExceptionKind k, std::map<std::string, Value> muts) {
  ExecutionOutcome o;
  o.kind = Kind::Exception;
  o.exception = k;
  o.mutated_inputs = std::move(muts);
  return o;
}

ExecutionOutcome ExecutionOutcome::exhausted() {
  ExecutionOutcome o;
  o.kind = Kind::ResourceExhausted;
  return o;
}

std::string ExecutionOutcome::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Return: os << "return " << return_value.to_string(); break;
    case Kind::Exception: os << "exception " << exception_kind_name(exception); break;
    case Kind::ResourceExhausted: os << "resource_exhausted"; break;
  }
  for (const auto& [name, v] : mutated_inputs) os << " " << name << "=" << v.to_string();
  return os.str();
}

bool outcomes_equal(const ExecutionOutcome& a, const ExecutionOutcome& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExecutionOutcome::Kind::Return:
      if (a.return_value != b.return_value) return false;
      break;
    case ExecutionOutcome::Kind::Exception:
      if (a.exception != b.exception) return false;
      break;
    case ExecutionOutcome::Kind::ResourceExhausted:
      return true;  // budget exhaustion carries no further observables
  }
  return a.mutated_inputs == b.mutated_inputs;
}

Int euclid_div(const Int& a, const Int& b) {
  assert(b != 0);
  Int q = a / b;  // truncated
  Int r = a - b * q;
  if (r < 0) q += (b > 0) ? -1 : 1;
  return q;
}

Int euclid_mod(const Int& a, const Int& b) {
  assert(b != 0);
  Int r = a % b;  // truncated, sign of a
  if (r < 0) r += (b > 0) ? b : -b;
  return r;
}

}  // namespace sep
