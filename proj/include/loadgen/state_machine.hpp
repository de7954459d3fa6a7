#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "loadgen/rng.hpp"

namespace loadgen {

enum class LoadState { Init, Network, Memory, Cpu, Done };

const char* to_string(LoadState state);
std::optional<LoadState> state_from_string(std::string_view name);

struct Transition {
    LoadState to = LoadState::Done;
    double probability = 0.0;
};

enum class TableMode { Deterministic, Probabilistic };

// Transition matrix over loader states. Done is always absorbing; a Done
// row is implicit when absent.
class TransitionTable {
public:
    // Network -> Memory -> Cpu in progression, then Done.
    static TransitionTable deterministic_default();

    // File format, one row per line:  FROM -> TO:prob[,TO:prob...]
    // A bare TO is shorthand for TO:1. '#' starts a comment.
    // Throws std::invalid_argument with the offending line number.
    static TransitionTable parse(const std::string& text);

    // Unvalidated construction for programmatic tables.
    static TransitionTable from_rows(std::map<LoadState, std::vector<Transition>> rows);

    // Checks that every row's probabilities sum to 1 within 1e-9 and that
    // every state reachable from Init reaches Done with probability 1
    // (absorbing-chain reachability on the matrix). Throws std::invalid_argument.
    void validate() const;

    TableMode mode() const;
    bool has_row(LoadState from) const { return rows_.count(from) > 0; }

    // Throws std::out_of_range when `from` has no row (and is not Done).
    const std::vector<Transition>& row(LoadState from) const;

    // Deterministic mode returns the single successor; probabilistic mode
    // samples the row by cumulative probability. Done returns Done.
    LoadState next(LoadState current, Rng& rng) const;

    const std::map<LoadState, std::vector<Transition>>& rows() const { return rows_; }

private:
    std::map<LoadState, std::vector<Transition>> rows_;
};

}  // namespace loadgen
