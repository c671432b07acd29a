#pragma once

#include "qal/interval.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qal {

// Raised when a refiner cannot keep its contract (inconsistent predicate, no sign change).
class OracleFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OutOfRange : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Facts about c known by construction.
struct ParamFacts {
    std::optional<Dyadic> exact;
    std::optional<int> superstable_period;  // P^n_c(0) = 0
    std::optional<int> parabolic_period;    // P^n_c has a fixed point with multiplier 1
};

class ParamSource {
public:
    virtual ~ParamSource() = default;
    // An element of D_m within 2^-(m-1) of c.
    virtual Dyadic answer(int m) = 0;
    virtual ParamFacts facts() const = 0;
    virtual std::string describe() const = 0;
};

// A source that can produce enclosures of c of any requested width.
class BracketSource : public ParamSource {
public:
    // Enclosure of width at most 2^-bits.
    virtual DyadicInterval refine(int bits) = 0;
    Dyadic answer(int m) override;
};

struct LedgerSummary {
    std::uint64_t total_units = 0;
    int max_precision = 0;
    std::size_t query_count = 0;
    friend bool operator==(const LedgerSummary&, const LedgerSummary&) = default;
};

class QueryLedger {
public:
    void charge(int m, const Dyadic& answer);
    std::uint64_t total_units() const { return total_; }
    int max_precision() const { return max_m_; }
    const std::vector<std::pair<int, Dyadic>>& log() const { return log_; }
    LedgerSummary report() const { return {total_, max_m_, log_.size()}; }

private:
    std::uint64_t total_ = 0;
    int max_m_ = 0;
    std::vector<std::pair<int, Dyadic>> log_;
};

LedgerSummary ledger_report(const QueryLedger& ledger);

class ParamOracle {
public:
    ParamOracle(std::shared_ptr<ParamSource> source, std::string spec);

    // Charges this oracle's own ledger.
    Dyadic query(int m);
    Dyadic query(int m, QueryLedger& ledger);

    // Closed enclosure of c read at precision m. Exact sources give a point,
    // charged at the bit length of the exact value when that exceeds m.
    DyadicInterval enclose(int m);

    ParamFacts facts() const { return source_->facts(); }
    bool is_exact() const { return facts().exact.has_value(); }
    const std::string& spec() const { return spec_; }
    std::string describe() const { return source_->describe(); }
    QueryLedger& ledger() { return ledger_; }
    const QueryLedger& ledger() const { return ledger_; }
    const std::shared_ptr<ParamSource>& source() const { return source_; }

    // Same parameter, empty cache and ledger.
    ParamOracle fresh() const { return ParamOracle(source_, spec_); }

private:
    std::shared_ptr<ParamSource> source_;
    std::string spec_;
    std::map<int, Dyadic> cache_;
    QueryLedger ledger_;
};

using SignPredicate = std::function<Sign(const DyadicInterval& c, const Precision& p)>;

struct BisectionOptions {
    int start_precision = 64;
    int max_precision = 4096;
};

ParamOracle oracle_exact(const Dyadic& d);
ParamOracle oracle_bisect(SignPredicate pred, const DyadicInterval& bracket, ParamFacts facts = {},
                          std::string spec = "bisect", BisectionOptions opts = {});
ParamOracle oracle_refiner(std::function<DyadicInterval(int bits)> refine, ParamFacts facts, std::string spec);
// Returns the farthest admissible element of D_m; hides exactness, keeps other facts.
ParamOracle oracle_adversarial(const ParamOracle& inner);

// Throws OutOfRange when c is certified outside [-2, 1/4].
void require_in_range(ParamOracle& o);

int max_precision_cap(int fallback = 4096);

}  // namespace qal
