// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#include "dialectic/legacy.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "dialectic/error.hpp"

namespace dialectic {

std::uint64_t LegacySystem::f(std::uint64_t i) const {
    return i < f_prefix.size() ? f_prefix[i] : i;
}

std::uint64_t LegacySystem::f_inverse(std::uint64_t v) const {
    if (v >= f_prefix.size()) return v;
    auto it = std::find(f_prefix.begin(), f_prefix.end(), v);
    if (it == f_prefix.end()) {
        throw Error(ErrorCode::kTranslation, "f is not invertible at " + std::to_string(v));
    }
    return static_cast<std::uint64_t>(it - f_prefix.begin());
}

std::set<std::uint64_t> LegacySystem::apply(std::uint64_t s,
                                            const std::set<std::uint64_t>& Y) const {
    std::set<std::uint64_t> out;
    if (inclusion_stage && *inclusion_stage <= s) out = Y;
    for (const auto& pr : pairs) {
        if (pr.stage > s) continue;
        if (std::includes(Y.begin(), Y.end(), pr.F.begin(), pr.F.end())) out.insert(pr.x);
    }
    return out;
}

std::optional<std::uint64_t> LegacyState::rho(std::uint64_t x) const {
    if (x >= stacks.size() || stacks[x].empty()) return std::nullopt;
    return stacks[x].back();
}

std::set<std::uint64_t> LegacyState::L(std::uint64_t x) const {
    std::set<std::uint64_t> out;
    for (std::uint64_t y = 0; y < x && y < stacks.size(); ++y) {
        if (!stacks[y].empty()) out.insert(stacks[y].back());
    }
    return out;
}

std::set<std::uint64_t> chi(const LegacySystem& system, const LegacyState& state,
                            std::uint64_t s, std::uint64_t i) {
    return system.apply(s, state.L(i));
}

LegacyState legacy_initial(const LegacySystem& system) {
    LegacyState st;
    st.stacks.push_back({system.f(0)});
    return st;
}

namespace {

struct Hits {
    std::optional<std::uint64_t> first_any;
    std::optional<std::uint64_t> first_c;
    std::optional<std::uint64_t> first_c_minus;
    bool c_at_first_any = false;
};

// Scans z = 0..m once, counting how many premises of each trigger pair are
// already in L_s(z).
Hits scan(const LegacySystem& sys, const LegacyState& st, std::uint64_t s) {
    struct Pending {
        std::size_t missing;
        bool is_c;
    };
    std::vector<Pending> pending;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_element;
    bool have_c = false;
    bool have_c_minus = false;
    for (const auto& pr : sys.pairs) {
        if (pr.stage > s || (pr.x != sys.c && pr.x != sys.c_minus)) continue;
        if (pr.F.empty()) {
            (pr.x == sys.c ? have_c : have_c_minus) = true;
            continue;
        }
        for (std::uint64_t e : pr.F) by_element[e].push_back(pending.size());
        pending.push_back({pr.F.size(), pr.x == sys.c});
    }
    const bool inclusion = sys.inclusion_stage && *sys.inclusion_stage <= s;

    Hits hits;
    std::set<std::uint64_t> seen;
    for (std::uint64_t z = 0; z <= st.p; ++z) {
        if (have_c && !hits.first_c) hits.first_c = z;
        if (have_c_minus && !hits.first_c_minus) hits.first_c_minus = z;
        if ((have_c || have_c_minus) && !hits.first_any) {
            hits.first_any = z;
            hits.c_at_first_any = have_c;
        }
        if (hits.first_c && hits.first_c_minus) break;
        auto v = st.rho(z);
        if (!v || !seen.insert(*v).second) continue;
        if (inclusion) {
            if (*v == sys.c) have_c = true;
            if (*v == sys.c_minus) have_c_minus = true;
        }
        if (auto it = by_element.find(*v); it != by_element.end()) {
            for (std::size_t idx : it->second) {
                if (--pending[idx].missing == 0) {
                    (pending[idx].is_c ? have_c : have_c_minus) = true;
                }
            }
        }
    }
    return hits;
}

}  // namespace

LegacyState legacy_step(const LegacySystem& system, const LegacyState& state, std::uint64_t s,
                        const LegacyOptions& options) {
    const Hits hits = scan(system, state, s);
    std::optional<std::uint64_t> z;
    bool clause2 = false;
    if (options.swap_clause_priority && hits.first_c_minus) {
        z = hits.first_c_minus;
    } else if (hits.first_any) {
        z = hits.first_any;
        clause2 = hits.c_at_first_any;
    }

    LegacyState next;
    next.stacks = state.stacks;
    if (!z) {
        next.p = state.p + 1;
        next.stacks.resize(next.p + 1);
        next.stacks[next.p] = {system.f(next.p)};
        next.h = next.p;
    } else {
        if (*z == 0) {
            throw Error(ErrorCode::kUndefinedPosition,
                        "revision demanded at position 0 at stage " + std::to_string(s));
        }
        const std::uint64_t zz = *z;
        if (clause2) {
            next.stacks[zz - 1].clear();
        } else {
            auto v = state.rho(zz - 1);
            if (!v) {
                throw Error(ErrorCode::kInvariant, "c^- hit above an empty stack at stage " +
                                                       std::to_string(s));
            }
            auto it = system.f_minus.find(*v);
            if (it == system.f_minus.end()) {
                throw Error(ErrorCode::kMissingReplacement,
                            "f^-(" + std::to_string(*v) + ") undefined at stage " +
                                std::to_string(s));
            }
            next.stacks[zz - 1].push_back(it->second);
        }
        next.stacks.resize(zz + 1);
        next.stacks[zz] = {system.f(zz)};
        next.p = zz;
        next.h = zz - 1;
    }
    if (next.h > 0) next.A = chi(system, next, s + 1, next.h - 1);
    return next;
}

std::vector<LegacyState> run_legacy(const LegacySystem& system, std::uint64_t stages,
                                    const LegacyOptions& options) {
    std::vector<LegacyState> out;
    out.reserve(stages + 1);
    out.push_back(legacy_initial(system));
    for (std::uint64_t s = 0; s < stages; ++s) {
        out.push_back(legacy_step(system, out.back(), s, options));
    }
    return out;
}

QSystem forward_translate(const LegacySystem& legacy) {
    std::vector<bool> hit(legacy.f_prefix.size(), false);
    for (std::uint64_t v : legacy.f_prefix) {
        if (v >= hit.size() || hit[v]) {
            throw Error(ErrorCode::kTranslation, "f prefix is not a permutation");
        }
        hit[v] = true;
    }
    auto arg = [&](std::uint64_t v) { return AxiomId{legacy.f_inverse(v)}; };

    RuleTable table;
    for (const auto& pr : legacy.pairs) {
        ConsequenceRule rule;
        rule.stage = pr.stage;
        for (std::uint64_t e : pr.F) rule.premises.insert(arg(e));
        if (pr.x == legacy.c) {
            rule.conclusion = Symbol::bottom();
        } else if (pr.x == legacy.c_minus) {
            rule.conclusion = Symbol::counterexample();
        } else {
            rule.conclusion = Symbol::of(arg(pr.x));
        }
        table.append(std::move(rule));
    }
    if (legacy.inclusion_stage) {
        table.append({*legacy.inclusion_stage, {arg(legacy.c)}, Symbol::bottom()});
        table.append({*legacy.inclusion_stage, {arg(legacy.c_minus)}, Symbol::counterexample()});
    }

    ReplacementMap r;
    r.allow_two_cycle(arg(legacy.c), arg(legacy.c_minus));
    for (const auto& [from, to] : legacy.f_minus) r.insert(arg(from), arg(to));
    return QSystem(std::move(table), std::move(r));
}

namespace {

// M(s) = 3 + max{r^t(x) : x <= s, t <= s}, extended one stage at a time.
class IterateBound {
public:
    explicit IterateBound(const ReplacementMap& r) : r_(r) {}

    std::uint64_t at(std::uint64_t s) {
        while (M_.size() <= s) extend();
        return M_[s];
    }

    /// Least s >= t with M(s) >= need.
    std::uint64_t first_covering(std::uint64_t t, std::uint64_t need) {
        std::uint64_t s = t;
        while (at(s) < need) ++s;
        return s;
    }

private:
    std::optional<std::uint64_t> next(std::optional<std::uint64_t> x) const {
        if (!x) return std::nullopt;
        auto y = r_.at(AxiomId{*x});
        return y ? std::optional<std::uint64_t>(y->index) : std::nullopt;
    }

    void extend() {
        const std::uint64_t s = M_.size();
        best_ = std::max(best_, s);
        for (auto& c : orbit_) {
            c = next(c);
            if (c) best_ = std::max(best_, *c);
        }
        std::optional<std::uint64_t> x = s;
        for (std::uint64_t t = 0; t < s && x; ++t) {
            x = next(x);
            if (x) best_ = std::max(best_, *x);
        }
        orbit_.push_back(x);
        M_.push_back(best_ + 3);
    }

    const ReplacementMap& r_;
    std::vector<std::optional<std::uint64_t>> orbit_;
    std::vector<std::uint64_t> M_;
    std::uint64_t best_ = 0;
};

}  // namespace

LegacySystem backward_translate(const QSystem& qsys) {
    LegacySystem out;
    out.c = 0;
    out.c_minus = 1;
    out.inclusion_stage = kBackwardOffset;
    out.f_minus[0] = 1;
    out.f_minus[1] = 0;
    for (const auto& [from, to] : qsys.replacement().entries()) {
        out.f_minus[from.index + 2] = to.index + 2;
    }
    out.pairs.push_back({1, 0, {0}});
    out.pairs.push_back({1, 1, {1}});

    IterateBound M(qsys.replacement());
    for (const auto& rule : qsys.table().rules()) {
        LegacyPair pr;
        for (AxiomId a : rule.premises) pr.F.insert(a.index + 2);
        if (rule.conclusion.is_bottom()) pr.x = 0;
        else if (rule.conclusion.is_counterexample()) pr.x = 1;
        else pr.x = rule.conclusion.axiom().index + 2;
        const std::uint64_t need = pr.F.empty() ? 0 : *pr.F.rbegin();
        pr.stage = kBackwardOffset + M.first_covering(rule.stage, need);
        out.pairs.push_back(std::move(pr));
    }
    return out;
}

namespace {

AlignmentReport diverged(std::uint64_t stage, std::optional<std::uint64_t> pos,
                         std::string detail, std::uint64_t checked) {
    AlignmentReport r;
    r.agreed = false;
    r.stages_checked = checked;
    r.mismatch_stage = stage;
    r.mismatch_position = pos;
    r.detail = std::move(detail);
    return r;
}

}  // namespace

AlignmentReport check_alignment(const RunTrace& trace, std::span<const LegacyState> legacy_run,
                                AlignmentDirection direction, const LegacySystem& legacy) {
    const bool forward = direction == AlignmentDirection::kForward;
    const std::uint64_t offset = forward ? 0 : kBackwardOffset;
    const std::uint64_t shift = forward ? 0 : 2;
    if (legacy_run.size() < trace.horizon + offset + 1) {
        throw Error(ErrorCode::kAlignmentScope,
                    "legacy run covers " + std::to_string(legacy_run.size()) +
                        " stages, need " + std::to_string(trace.horizon + offset + 1));
    }
    BeliefString sigma;
    AlignmentReport report;
    for (std::uint64_t q = 0; q <= trace.horizon; ++q) {
        if (q > 0) apply_event(sigma, trace.events[q - 1]);
        const std::uint64_t s = q + offset;
        const LegacyState& st = legacy_run[s];
        if (st.p < shift || sigma.size() != st.p - shift) {
            return diverged(s, std::nullopt,
                            "length " + std::to_string(sigma.size()) + " vs p=" +
                                std::to_string(st.p),
                            q);
        }
        for (std::uint64_t n = 0; n < sigma.size(); ++n) {
            auto v = st.rho(n + shift);
            Token expect = Token::gap();
            if (v) {
                if (forward) {
                    expect = Token::of(AxiomId{legacy.f_inverse(*v)});
                } else if (*v >= 2) {
                    expect = Token::of(AxiomId{*v - 2});
                } else {
                    return diverged(s, n, "stack holds " + std::to_string(*v), q);
                }
            }
            if (sigma[n] != expect) {
                return diverged(s, n,
                                "sigma has " + format_token(sigma[n]) + ", stack gives " +
                                    format_token(expect),
                                q);
            }
        }
        report.stages_checked = q + 1;
    }
    return report;
}

std::string format(const LegacyState& state) {
    std::ostringstream os;
    for (std::size_t x = 0; x < state.stacks.size(); ++x) {
        os << x << ':';
        for (std::uint64_t v : state.stacks[x]) os << ' ' << v;
        os << '\n';
    }
    os << "p=" << state.p << ", h=" << state.h << ", A={";
    bool first = true;
    for (std::uint64_t v : state.A) {
        os << (first ? "" : ",") << v;
        first = false;
    }
    os << "}\n";
    return os.str();
}

std::string format(const AlignmentReport& r) {
    std::ostringstream os;
    if (r.agreed) {
        os << "agree stages=" << r.stages_checked << '\n';
    } else {
        os << "mismatch stage=" << *r.mismatch_stage;
        if (r.mismatch_position) os << " position=" << *r.mismatch_position;
        os << " after " << r.stages_checked << " agreeing stages: " << r.detail << '\n';
    }
    return os.str();
}

}  // namespace dialectic
