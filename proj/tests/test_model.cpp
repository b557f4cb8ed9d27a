#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lll/model.hpp"

#include <random>

using namespace lll;

namespace {

EventSystem two_mutual(Rational /*p*/ = Rational(1, 4)) {
    // scopes {0,1} and {1,2}: one shared variable forces the edge
    std::vector<VariableSpec> vars{uniform_variable(2), uniform_variable(2),
                                   uniform_variable(2)};
    std::vector<EventSpec> events{
        extensional_event({0, 1}, {{0, 0}}),
        extensional_event({1, 2}, {{0, 0}}),
    };
    return EventSystem(std::move(vars), std::move(events));
}

}  // namespace

TEST_CASE("variable validation") {
    CHECK(uniform_variable(1).domain_size == 1);
    CHECK(uniform_variable(4).weights[0] == Rational(1, 4));
    CHECK_THROWS_AS(uniform_variable(0), ValidationError);
    CHECK_THROWS_AS(weighted_variable({}), ValidationError);
    CHECK_THROWS_AS(weighted_variable({Rational(1, 2), Rational(1, 3)}),
                    ValidationError);  // sums to 5/6
    CHECK_THROWS_AS(weighted_variable({Rational(3, 2), Rational(-1, 2)}),
                    ValidationError);  // negative weight
    VariableSpec w = weighted_variable({Rational(1, 3), Rational(2, 3)});
    CHECK(w.domain_size == 2);
    // zero weights are allowed; the value just never gets drawn
    CHECK_NOTHROW(weighted_variable({Rational(0), Rational(1)}));
}

TEST_CASE("event validation") {
    std::vector<VariableSpec> vars{uniform_variable(2), uniform_variable(3)};
    auto make = [&](std::vector<int> scope,
                    std::set<std::vector<int>> forbidden) {
        std::vector<EventSpec> events{
            extensional_event(std::move(scope), std::move(forbidden))};
        return EventSystem(std::vector<VariableSpec>(vars), std::move(events));
    };
    CHECK_NOTHROW(make({0, 1}, {{0, 2}}));
    CHECK_THROWS_AS(make({}, {}), ValidationError);         // empty scope
    CHECK_THROWS_AS(make({0, 0}, {}), ValidationError);     // duplicate
    CHECK_THROWS_AS(make({1, 0}, {}), ValidationError);     // not increasing
    CHECK_THROWS_AS(make({0, 2}, {}), ValidationError);     // out of range
    CHECK_THROWS_AS(make({0, 1}, {{0}}), ValidationError);  // arity
    CHECK_THROWS_AS(make({0, 1}, {{0, 3}}), ValidationError);  // bad value
    CHECK_THROWS_AS(make({0, 1}, {{0, -1}}), ValidationError);

    // a predicate event cannot also carry forbidden tuples
    EventSpec bad = intensional_event(
        {0}, [](std::span<const int> t) { return t[0] == 0; });
    bad.forbidden.insert({0});
    std::vector<EventSpec> events{bad};
    CHECK_THROWS_AS(
        EventSystem(std::vector<VariableSpec>(vars), std::move(events)),
        ValidationError);
}

TEST_CASE("dependency graph from scope intersections") {
    SUBCASE("shared variable forces the edge") {
        EventSystem sys = two_mutual();
        CHECK(sys.dependency().neighbors(0) == std::vector<int>{0, 1});
        CHECK(sys.dependency().neighbors(1) == std::vector<int>{0, 1});
    }
    SUBCASE("disjoint scopes stay isolated") {
        std::vector<VariableSpec> vars{uniform_variable(2),
                                       uniform_variable(2)};
        std::vector<EventSpec> events{extensional_event({0}, {{0}}),
                                      extensional_event({1}, {{0}})};
        EventSystem sys(std::move(vars), std::move(events));
        CHECK(sys.dependency().neighbors(0) == std::vector<int>{0});
        CHECK(sys.dependency().neighbors(1) == std::vector<int>{1});
    }
    SUBCASE("path of overlapping scopes") {
        std::vector<VariableSpec> vars(4, uniform_variable(2));
        std::vector<EventSpec> events{extensional_event({0, 1}, {{0, 0}}),
                                      extensional_event({1, 2}, {{0, 0}}),
                                      extensional_event({2, 3}, {{0, 0}})};
        EventSystem sys(std::move(vars), std::move(events));
        CHECK(sys.dependency().neighbors(0) == std::vector<int>{0, 1});
        CHECK(sys.dependency().neighbors(1) == std::vector<int>{0, 1, 2});
        CHECK(sys.dependency().neighbors(2) == std::vector<int>{1, 2});
    }
}

TEST_CASE("dependency graph is reflexive and symmetric") {
    std::vector<VariableSpec> vars(6, uniform_variable(2));
    std::vector<EventSpec> events{
        extensional_event({0, 1, 2}, {{0, 0, 0}}),
        extensional_event({2, 3}, {{0, 0}}),
        extensional_event({4}, {{0}}),
        extensional_event({0, 5}, {{0, 0}}),
    };
    EventSystem sys(std::move(vars), std::move(events));
    const DependencyGraph& g = sys.dependency();
    for (int i = 0; i < g.size(); ++i) {
        const auto& ni = g.neighbors(i);
        CHECK(std::binary_search(ni.begin(), ni.end(), i));
        for (int j : ni) {
            const auto& nj = g.neighbors(j);
            CHECK(std::binary_search(nj.begin(), nj.end(), i));
        }
    }
}

TEST_CASE("event probability") {
    SUBCASE("single uniform binary variable") {
        std::vector<VariableSpec> vars{uniform_variable(2)};
        EventSpec e = extensional_event({0}, {{0}});
        CHECK(event_probability(e, vars) == Rational(1, 2));
    }
    SUBCASE("one forbidden tuple of four") {
        std::vector<VariableSpec> vars{uniform_variable(2),
                                       uniform_variable(2)};
        EventSpec e = extensional_event({0, 1}, {{1, 0}});
        CHECK(event_probability(e, vars) == Rational(1, 4));
    }
    SUBCASE("three forbidden tuples out of eight") {
        std::vector<VariableSpec> vars(3, uniform_variable(2));
        EventSpec e =
            extensional_event({0, 1, 2}, {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}});
        CHECK(event_probability(e, vars) == Rational(3, 8));
    }
    SUBCASE("weighted tuples multiply their weights") {
        std::vector<VariableSpec> vars{
            weighted_variable({Rational(1, 2), Rational(1, 3), Rational(1, 6)}),
            weighted_variable({Rational(1, 4), Rational(3, 4)})};
        EventSpec e = extensional_event({0, 1}, {{2, 0}, {0, 1}});
        CHECK(event_probability(e, vars) ==
              Rational(1, 6) * Rational(1, 4) + Rational(1, 2) * Rational(3, 4));
    }
    SUBCASE("empty forbidden set never occurs") {
        std::vector<VariableSpec> vars{uniform_variable(2)};
        EventSpec e = extensional_event({0}, {});
        CHECK(event_probability(e, vars) == Rational(0));
    }
    SUBCASE("complement tuple set sums to one") {
        std::vector<VariableSpec> vars{
            weighted_variable({Rational(2, 5), Rational(3, 5)}),
            uniform_variable(3)};
        std::set<std::vector<int>> forb{{0, 0}, {1, 2}};
        std::set<std::vector<int>> comp;
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 3; ++b) {
                if (!forb.count({a, b})) comp.insert({a, b});
            }
        }
        EventSpec e1 = extensional_event({0, 1}, forb);
        EventSpec e2 = extensional_event({0, 1}, comp);
        CHECK(event_probability(e1, vars) + event_probability(e2, vars) ==
              Rational(1));
    }
    SUBCASE("predicate events enumerate the scope domain") {
        std::vector<VariableSpec> vars{uniform_variable(2),
                                       uniform_variable(2)};
        EventSpec e = intensional_event(
            {0, 1}, [](std::span<const int> t) { return t[0] == t[1]; });
        CHECK(event_probability(e, vars) == Rational(1, 2));
    }
    SUBCASE("enumeration cap guards predicate blowup") {
        std::vector<VariableSpec> vars(21, uniform_variable(2));
        std::vector<int> scope(21);
        for (int i = 0; i < 21; ++i) scope[i] = i;
        EventSpec e = intensional_event(
            scope, [](std::span<const int>) { return false; });
        CHECK_THROWS_AS(event_probability(e, vars, 1'000'000),
                        EnumerationCapExceeded);
        CHECK(event_probability(e, vars, 1u << 21) == Rational(0));
    }
}

TEST_CASE("evaluate_event") {
    std::vector<VariableSpec> vars{uniform_variable(2), uniform_variable(2),
                                   uniform_variable(2)};
    EventSpec x0_zero = extensional_event({0}, {{0}});
    CHECK(evaluate_event(x0_zero, Assignment{{0, 1, 1}}));
    CHECK_FALSE(evaluate_event(x0_zero, Assignment{{1, 0, 0}}));

    EventSpec mismatch = extensional_event({0, 1}, {{0, 1}, {1, 0}});
    CHECK_FALSE(evaluate_event(mismatch, Assignment{{1, 1, 0}}));
    CHECK(evaluate_event(mismatch, Assignment{{0, 1, 0}}));
}

TEST_CASE("evaluate_event ignores out-of-scope variables") {
    std::vector<VariableSpec> vars(5, uniform_variable(3));
    EventSpec e = extensional_event({1, 3}, {{0, 2}, {1, 1}, {2, 0}});
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        Assignment a{{0, 0, 0, 0, 0}};
        for (int& v : a.values) v = static_cast<int>(rng() % 3);
        bool before = evaluate_event(e, a);
        Assignment b = a;
        for (int mut = 0; mut < 4; ++mut) {
            int out_of_scope[] = {0, 2, 4};
            b.values[out_of_scope[rng() % 3]] = static_cast<int>(rng() % 3);
            CHECK(evaluate_event(e, b) == before);
        }
    }
}

TEST_CASE("scope lint flags provably irrelevant positions") {
    std::vector<VariableSpec> vars{uniform_variable(2), uniform_variable(2)};
    SUBCASE("second position irrelevant") {
        // forbidden iff first component is 0, whatever the second says
        EventSpec e = extensional_event({0, 1}, {{0, 0}, {0, 1}});
        CHECK(lint_scope(e, vars) == std::vector<int>{1});
    }
    SUBCASE("minimal scope is clean") {
        EventSpec e = extensional_event({0, 1}, {{0, 0}});
        CHECK(lint_scope(e, vars).empty());
    }
    SUBCASE("empty forbidden set depends on nothing") {
        EventSpec e = extensional_event({0, 1}, {});
        CHECK(lint_scope(e, vars) == std::vector<int>{0, 1});
    }
}

TEST_CASE("event system bookkeeping") {
    EventSystem sys = two_mutual();
    CHECK(sys.num_variables() == 3);
    CHECK(sys.num_events() == 2);
    CHECK(sys.event(0).id == 0);
    CHECK(sys.event(1).id == 1);
    CHECK(sys.variable(1).domain_size == 2);
    std::vector<Rational> probs = event_probabilities(sys);
    CHECK(probs == std::vector<Rational>{Rational(1, 4), Rational(1, 4)});
}
