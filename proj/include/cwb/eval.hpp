#pragma once

#include <pthread.h>

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "cwb/natural.hpp"
#include "cwb/term.hpp"

namespace cwb {

/// Result of a fuel-metered run. OutOfFuel means "not yet halted".
struct EvalResult {
  bool halted = false;
  Natural value;
  std::uint64_t steps = 0;

  static EvalResult out_of_fuel() { return {}; }
  bool operator==(const EvalResult& o) const {
    return halted == o.halted && (!halted || (value == o.value && steps == o.steps));
  }
};

namespace detail {

// Big-step evaluator. Costs: one unit per constructor visit and one per Mu
// iteration; Univ and Clock pay one unit plus whatever the inner run uses.
class Machine {
 public:
  explicit Machine(std::uint64_t fuel, std::uint32_t depth = 0) : left_(fuel), depth_(depth) {}

  bool run(const TermNode* t, const Natural& x, Natural& out) {
    if (left_ == 0) return false;
    if (++depth_ % kSegment == 0) {
      bool ok = run_on_fresh_stack(t, x, out);
      --depth_;
      return ok;
    }
    bool ok = step(t, x, out);
    --depth_;
    return ok;
  }

  std::uint64_t used() const { return start_ - left_; }
  std::uint64_t left() const { return left_; }

 private:
  // Nesting depth is bounded only by fuel, so every kSegment levels the run
  // continues on a new thread with its own stack.
  static constexpr std::uint32_t kSegment = 8192;
  static constexpr std::size_t kStackBytes = std::size_t(128) << 20;

  struct Job {
    Machine* m;
    const TermNode* t;
    const Natural* x;
    Natural* out;
    bool ok;
  };

  bool run_on_fresh_stack(const TermNode* t, const Natural& x, Natural& out) {
    Job job{this, t, &x, &out, false};
    pthread_attr_t attr;
    pthread_attr_init(&attr);
    pthread_attr_setstacksize(&attr, kStackBytes);
    pthread_t th;
    int rc = pthread_create(
        &th, &attr,
        [](void* p) -> void* {
          auto* j = static_cast<Job*>(p);
          j->ok = j->m->step(j->t, *j->x, *j->out);
          return nullptr;
        },
        &job);
    pthread_attr_destroy(&attr);
    if (rc != 0) throw std::runtime_error("cannot extend the evaluation stack");
    pthread_join(th, nullptr);
    return job.ok;
  }

  bool step(const TermNode* t, const Natural& x, Natural& out) {
    --left_;
    switch (t->op) {
      case Op::Zero: out = 0; return true;
      case Op::Succ: out = x.succ(); return true;
      case Op::Pred: out = x.pred(); return true;
      case Op::Id: out = x; return true;
      case Op::Fst: out = fst(x); return true;
      case Op::Snd: out = snd(x); return true;
      case Op::Lit: out = t->lit; return true;
      case Op::Pair: {
        Natural l, r;
        if (!run(t->a.get(), x, l) || !run(t->b.get(), x, r)) return false;
        out = pair(l, r);
        return true;
      }
      case Op::Comp: {
        Natural mid;
        if (!run(t->b.get(), x, mid)) return false;
        return run(t->a.get(), mid, out);
      }
      case Op::If0: {
        Natural c;
        if (!run(t->a.get(), x, c)) return false;
        return run(c.is_zero() ? t->b.get() : t->c.get(), x, out);
      }
      case Op::Mu: {
        Natural y = 0;
        for (;;) {
          if (left_ == 0) return false;
          --left_;
          Natural v;
          if (!run(t->a.get(), pair(x, y), v)) return false;
          if (v.is_zero()) {
            out = y;
            return true;
          }
          y = y.succ();
        }
      }
      case Op::Univ: {
        auto [e, n] = unpair(x);
        auto prog = decode_node(e);
        return run(prog.get(), n, out);
      }
      case Op::Clock: {
        auto [e, ns] = unpair(x);
        auto [n, s] = unpair(ns);
        std::uint64_t bound = s.saturate();
        auto prog = decode_node(e);
        Machine inner(bound < left_ ? bound : left_, depth_);
        Natural v;
        if (inner.run(prog.get(), n, v)) {
          left_ -= inner.used();
          out = v.succ();
          return true;
        }
        if (bound > left_) {
          // the inner run was cut by the outer budget, not by its own clock
          left_ = 0;
          return false;
        }
        left_ -= bound;
        out = 0;
        return true;
      }
    }
    return false;
  }

  std::uint64_t left_;
  std::uint64_t start_ = left_;
  std::uint32_t depth_;
};

}  // namespace detail

inline EvalResult eval(const Term& t, const Natural& arg, std::uint64_t fuel) {
  detail::Machine m(fuel);
  Natural out;
  if (!m.run(t.raw(), arg, out)) return EvalResult::out_of_fuel();
  return {true, out, m.used()};
}

inline EvalResult eval(const Natural& e, const Natural& arg, std::uint64_t fuel) {
  return eval(decode(e), arg, fuel);
}

/// Steps of the halting run within `fuel`, if any.
inline std::optional<std::uint64_t> halting_steps(const Natural& e, const Natural& arg, std::uint64_t fuel) {
  EvalResult r = eval(e, arg, fuel);
  if (!r.halted) return std::nullopt;
  return r.steps;
}

}  // namespace cwb
