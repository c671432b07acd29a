#include "qal/oracle.hpp"

#include <cstdlib>
#include <string>

namespace qal {

Dyadic BracketSource::answer(int m) {
    DyadicInterval b = refine(m + 1);
    return dy_round(b.mid(), m, Rounding::nearest);
}

void QueryLedger::charge(int m, const Dyadic& answer) {
    total_ += static_cast<std::uint64_t>(m);
    if (m > max_m_) max_m_ = m;
    log_.emplace_back(m, answer);
}

LedgerSummary ledger_report(const QueryLedger& ledger) { return ledger.report(); }

ParamOracle::ParamOracle(std::shared_ptr<ParamSource> source, std::string spec)
    : source_(std::move(source)), spec_(std::move(spec)) {}

Dyadic ParamOracle::query(int m) { return query(m, ledger_); }

Dyadic ParamOracle::query(int m, QueryLedger& ledger) {
    if (m < 1) throw std::invalid_argument("oracle precision must be positive");
    auto it = cache_.find(m);
    if (it == cache_.end()) it = cache_.emplace(m, source_->answer(m)).first;
    ledger.charge(m, it->second);
    return it->second;
}

DyadicInterval ParamOracle::enclose(int m) {
    if (auto ex = facts().exact) {
        int need = static_cast<int>(ex->denominator_bits());
        Dyadic a = query(std::max(m, std::max(need, 1)));
        return {a, a};
    }
    Dyadic a = query(m);
    Dyadic r = dy_pow2(-(m - 1));
    return {a - r, a + r};
}

namespace {

class ExactSource final : public ParamSource {
public:
    explicit ExactSource(Dyadic d) : d_(std::move(d)) {}
    Dyadic answer(int m) override { return dy_round(d_, m, Rounding::nearest); }
    ParamFacts facts() const override {
        ParamFacts f;
        f.exact = d_;
        return f;
    }
    std::string describe() const override { return "exact " + d_.str(); }

private:
    Dyadic d_;
};

// The dyadic with the shortest expansion inside [a, b].
Dyadic simplest_in(const Dyadic& a, const Dyadic& b) {
    for (std::int64_t k = -4;; ++k) {
        Dyadic c = dy_round(a, k, Rounding::up);
        if (c <= b) return c;
    }
}

class BisectionSource final : public BracketSource {
public:
    BisectionSource(SignPredicate pred, const DyadicInterval& bracket, ParamFacts facts, std::string spec,
                    BisectionOptions opts)
        : pred_(std::move(pred)), a_(bracket.lo()), b_(bracket.hi()), facts_(std::move(facts)),
          spec_(std::move(spec)), opts_(opts) {
        Sign sa = eval(a_);
        Sign sb = eval(b_);
        if (sa == Sign::zero) {
            found(a_);
            return;
        }
        if (sb == Sign::zero) {
            found(b_);
            return;
        }
        if (sa == Sign::undecided || sb == Sign::undecided || sa == sb) {
            throw OracleFault("no certified sign change in bracket " + bracket.str() + " for " + spec_);
        }
        sa_ = sa;
        Dyadic s = simplest_in(a_, b_);
        if (s != a_ && s != b_ && eval(s) == Sign::zero) found(s);
    }

    DyadicInterval refine(int bits) override {
        std::lock_guard<std::mutex> lock(mu_);
        Dyadic target = dy_pow2(-bits);
        while (target < b_ - a_) {
            Dyadic w = b_ - a_;
            Dyadic m = dy_midpoint(a_, b_);
            Sign s = eval(m);
            if (s == Sign::undecided) {
                // shifted probes around an unresolvable midpoint
                for (Dyadic frac : {Dyadic::ratio(3, 3), Dyadic::ratio(5, 3), Dyadic::ratio(1, 2), Dyadic::ratio(3, 2)}) {
                    Dyadic cand = a_ + w * frac;
                    s = eval(cand);
                    if (s != Sign::undecided) {
                        m = cand;
                        break;
                    }
                }
                if (s == Sign::undecided) {
                    throw OracleFault("bisection predicate undecided at precision cap for " + spec_);
                }
            }
            if (s == Sign::zero) {
                found(m);
                break;
            }
            if (s == sa_) {
                a_ = m;
            } else {
                b_ = m;
            }
        }
        return {a_, b_};
    }

    ParamFacts facts() const override {
        std::lock_guard<std::mutex> lock(mu_);
        return facts_;
    }

    std::string describe() const override { return "bisection " + spec_; }

private:
    Sign eval(const Dyadic& x) {
        for (int p = opts_.start_precision; p <= opts_.max_precision; p *= 2) {
            Sign s = pred_(DyadicInterval(x), Precision(p));
            if (s != Sign::undecided) return s;
        }
        return Sign::undecided;
    }

    void found(const Dyadic& x) {
        a_ = b_ = x;
        facts_.exact = x;
    }

    SignPredicate pred_;
    Dyadic a_, b_;
    Sign sa_ = Sign::neg;
    ParamFacts facts_;
    std::string spec_;
    BisectionOptions opts_;
    mutable std::mutex mu_;
};

class RefinerSource final : public BracketSource {
public:
    RefinerSource(std::function<DyadicInterval(int)> fn, ParamFacts facts, std::string spec)
        : fn_(std::move(fn)), facts_(std::move(facts)), spec_(std::move(spec)) {}

    DyadicInterval refine(int bits) override {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.lower_bound(bits);
        if (it != cache_.end()) return it->second;
        DyadicInterval r = fn_(bits);
        if (dy_pow2(-bits) < r.width()) throw OracleFault("refiner missed requested width for " + spec_);
        cache_.emplace(bits, r);
        return r;
    }
    ParamFacts facts() const override { return facts_; }
    std::string describe() const override { return "refiner " + spec_; }

private:
    std::function<DyadicInterval(int)> fn_;
    ParamFacts facts_;
    std::string spec_;
    std::map<int, DyadicInterval> cache_;
    std::mutex mu_;
};

class AdversarialSource final : public ParamSource {
public:
    explicit AdversarialSource(std::shared_ptr<ParamSource> inner) : inner_(std::move(inner)) {}

    Dyadic answer(int m) override {
        Dyadic a = inner_->answer(m + 8);  // within 2^-(m+7) of c
        Dyadic reach = dy_pow2(-(m - 1)) - dy_pow2(-(m + 7));
        Dyadic lo = dy_round(a - reach, m, Rounding::up);
        Dyadic hi = dy_round(a + reach, m, Rounding::down);
        return (a - lo) >= (hi - a) ? lo : hi;
    }
    ParamFacts facts() const override {
        ParamFacts f = inner_->facts();
        f.exact.reset();
        return f;
    }
    std::string describe() const override { return "adversarial(" + inner_->describe() + ")"; }

private:
    std::shared_ptr<ParamSource> inner_;
};

}  // namespace

ParamOracle oracle_exact(const Dyadic& d) { return ParamOracle(std::make_shared<ExactSource>(d), "exact:" + d.str()); }

ParamOracle oracle_bisect(SignPredicate pred, const DyadicInterval& bracket, ParamFacts facts, std::string spec,
                          BisectionOptions opts) {
    auto src = std::make_shared<BisectionSource>(std::move(pred), bracket, std::move(facts), spec, opts);
    return ParamOracle(std::move(src), std::move(spec));
}

ParamOracle oracle_refiner(std::function<DyadicInterval(int bits)> refine, ParamFacts facts, std::string spec) {
    auto src = std::make_shared<RefinerSource>(std::move(refine), std::move(facts), spec);
    return ParamOracle(std::move(src), std::move(spec));
}

ParamOracle oracle_adversarial(const ParamOracle& inner) {
    return ParamOracle(std::make_shared<AdversarialSource>(inner.source()), "adversarial:" + inner.spec());
}

void require_in_range(ParamOracle& o) {
    DyadicInterval e = o.enclose(4);
    if (e.hi() < Dyadic(-2) || Dyadic::ratio(1, 2) < e.lo()) {
        throw OutOfRange("parameter outside [-2, 1/4]: " + o.spec());
    }
}

int max_precision_cap(int fallback) {
    if (const char* env = std::getenv("QAL_MAX_PRECISION")) {
        try {
            int v = std::stoi(env);
            if (v >= 8) return v;
        } catch (const std::exception&) {
        }
    }
    return fallback;
}

}  // namespace qal
