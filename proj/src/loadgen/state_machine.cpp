#include "loadgen/state_machine.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "common/text.hpp"

namespace loadgen {

const char* to_string(LoadState state) {
    switch (state) {
        case LoadState::Init: return "Init";
        case LoadState::Network: return "Network";
        case LoadState::Memory: return "Memory";
        case LoadState::Cpu: return "Cpu";
        case LoadState::Done: return "Done";
    }
    return "?";
}

std::optional<LoadState> state_from_string(std::string_view name) {
    if (name == "Init") return LoadState::Init;
    if (name == "Network") return LoadState::Network;
    if (name == "Memory") return LoadState::Memory;
    if (name == "Cpu") return LoadState::Cpu;
    if (name == "Done") return LoadState::Done;
    return std::nullopt;
}

TransitionTable TransitionTable::deterministic_default() {
    std::map<LoadState, std::vector<Transition>> rows;
    rows[LoadState::Init] = {{LoadState::Network, 1.0}};
    rows[LoadState::Network] = {{LoadState::Memory, 1.0}};
    rows[LoadState::Memory] = {{LoadState::Cpu, 1.0}};
    rows[LoadState::Cpu] = {{LoadState::Done, 1.0}};
    return from_rows(std::move(rows));
}

TransitionTable TransitionTable::parse(const std::string& text) {
    std::map<LoadState, std::vector<Transition>> rows;
    int lineno = 0;
    for (const auto& raw : common::split(text, '\n')) {
        ++lineno;
        std::string_view line = common::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const std::string where = "table line " + std::to_string(lineno);

        size_t arrow = line.find("->");
        if (arrow == std::string_view::npos)
            throw std::invalid_argument(where + ": expected 'FROM -> TO:prob[,...]'");
        auto from = state_from_string(common::trim(line.substr(0, arrow)));
        if (!from) throw std::invalid_argument(where + ": unknown state '" +
                                               std::string(common::trim(line.substr(0, arrow))) + "'");
        if (rows.count(*from)) throw std::invalid_argument(where + ": duplicate row for " + to_string(*from));

        std::vector<Transition> row;
        for (const auto& entry : common::split(line.substr(arrow + 2), ',')) {
            std::string_view item = common::trim(entry);
            std::string_view to_name = item;
            double prob = 1.0;
            if (size_t colon = item.rfind(':'); colon != std::string_view::npos) {
                to_name = common::trim(item.substr(0, colon));
                if (!common::parse_f64(common::trim(item.substr(colon + 1)), prob))
                    throw std::invalid_argument(where + ": bad probability in '" + std::string(item) + "'");
            }
            auto to = state_from_string(to_name);
            if (!to) throw std::invalid_argument(where + ": unknown state '" + std::string(to_name) + "'");
            if (prob < 0.0 || prob > 1.0)
                throw std::invalid_argument(where + ": probability out of range in '" + std::string(item) + "'");
            row.push_back(Transition{*to, prob});
        }
        if (row.empty()) throw std::invalid_argument(where + ": empty row");
        rows[*from] = std::move(row);
    }
    TransitionTable table = from_rows(std::move(rows));
    table.validate();
    return table;
}

TransitionTable TransitionTable::from_rows(std::map<LoadState, std::vector<Transition>> rows) {
    TransitionTable table;
    table.rows_ = std::move(rows);
    return table;
}

void TransitionTable::validate() const {
    for (const auto& [from, row] : rows_) {
        double sum = 0.0;
        for (const auto& tr : row) sum += tr.probability;
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument(std::string("row ") + to_string(from) + " probabilities sum to " +
                                        std::to_string(sum) + ", not 1");
        if (from == LoadState::Done) {
            for (const auto& tr : row)
                if (tr.to != LoadState::Done && tr.probability > 0.0)
                    throw std::invalid_argument("Done must be absorbing");
        }
    }

    // Absorption: every state reachable from Init must reach Done.
    auto successors = [&](LoadState s) {
        std::vector<LoadState> out;
        auto it = rows_.find(s);
        if (it == rows_.end()) return out;
        for (const auto& tr : it->second)
            if (tr.probability > 0.0) out.push_back(tr.to);
        return out;
    };
    auto reachable_from = [&](LoadState start) {
        std::set<LoadState> seen{start};
        std::vector<LoadState> frontier{start};
        while (!frontier.empty()) {
            LoadState s = frontier.back();
            frontier.pop_back();
            for (LoadState nxt : successors(s))
                if (seen.insert(nxt).second) frontier.push_back(nxt);
        }
        return seen;
    };

    for (LoadState s : reachable_from(LoadState::Init)) {
        if (s == LoadState::Done) continue;
        if (!rows_.count(s))
            throw std::invalid_argument(std::string("state ") + to_string(s) + " is reachable but has no row");
        if (!reachable_from(s).count(LoadState::Done))
            throw std::invalid_argument(std::string("state ") + to_string(s) + " cannot reach Done");
    }
}

TableMode TransitionTable::mode() const {
    for (const auto& [from, row] : rows_) {
        (void)from;
        if (row.size() != 1 || std::abs(row.front().probability - 1.0) > 1e-9) return TableMode::Probabilistic;
    }
    return TableMode::Deterministic;
}

const std::vector<Transition>& TransitionTable::row(LoadState from) const {
    auto it = rows_.find(from);
    if (it == rows_.end())
        throw std::out_of_range(std::string("no transition row for state ") + to_string(from));
    return it->second;
}

LoadState TransitionTable::next(LoadState current, Rng& rng) const {
    if (current == LoadState::Done && !rows_.count(LoadState::Done)) return LoadState::Done;
    const auto& r = row(current);
    if (r.size() == 1) return r.front().to;
    double u = uniform_co(rng);
    double cum = 0.0;
    for (const auto& tr : r) {
        cum += tr.probability;
        if (u < cum) return tr.to;
    }
    return r.back().to;  // guard against rounding at u ~ 1
}

}  // namespace loadgen
