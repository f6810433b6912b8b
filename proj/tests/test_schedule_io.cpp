#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdmol/schedule_io.hpp"

#include <random>

using namespace qdmol;

TEST_CASE("rational formatting and parsing") {
  CHECK(format_rational(Rational(1, 2)) == "1/2");
  CHECK(format_rational(Rational(-3, 4)) == "-3/4");
  CHECK(format_rational(Rational(8, 4)) == "2");
  CHECK(format_rational(Rational(0)) == "0");
  CHECK(parse_rational("1/2") == Rational(1, 2));
  CHECK(parse_rational("-7/3") == Rational(-7, 3));
  CHECK(parse_rational("5") == 5);
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("/2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("two"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/-2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(" 1"), std::invalid_argument);
}

TEST_CASE("schedule text format is exactly what it says") {
  const Lattice chain = Lattice::chain(4);
  Schedule sched(chain);
  sched.append(ChargeConfig(chain, {ChargeState::Up, ChargeState::Up, ChargeState::Down,
                                    ChargeState::Down}),
               Rational(1, 2));
  sched.append(ChargeConfig(chain, ChargeState::Up), Rational(1));
  sched.append(ChargeConfig(chain, {ChargeState::Neutral, ChargeState::Up, ChargeState::Neutral,
                                    ChargeState::Down}),
               Rational(0));
  CHECK(format_schedule(sched) ==
        "chain 4\n"
        "1/2 UUDD\n"
        "1 UUUU\n"
        "0 NUND\n");

  const Lattice grid = Lattice::grid(2, 3);
  Schedule gsched(grid);
  gsched.append(ChargeConfig(grid, ChargeState::Down), Rational(7, 3));
  CHECK(format_schedule(gsched) ==
        "grid 2 3\n"
        "7/3 DDDDDD\n");
}

TEST_CASE("parsing tolerates blank lines and comments") {
  const Schedule sched = parse_schedule(
      "# cluster run\n"
      "\n"
      "chain 3\n"
      "  1/2   UUD  \n"
      "\n"
      "# trailing note\n"
      "1 UUU");
  CHECK(sched.lattice() == Lattice::chain(3));
  REQUIRE(sched.steps().size() == 2);
  CHECK(sched.steps()[0].duration == Rational(1, 2));
  CHECK(sched.steps()[0].config.at(2) == ChargeState::Down);
  CHECK(sched.steps()[1].duration == 1);
}

TEST_CASE("schedule round-trips bit-exactly") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> state(0, 2);
  std::uniform_int_distribution<int> numerator(0, 12);
  std::uniform_int_distribution<int> denominator(1, 9);

  for (int trial = 0; trial < 50; ++trial) {
    const bool use_grid = trial % 2 == 1;
    const Lattice lattice = use_grid ? Lattice::grid(2 + trial % 3, 2 + trial % 4)
                                     : Lattice::chain(2 + trial % 9);
    Schedule sched(lattice);
    const int n_steps = static_cast<int>(rng() % 5);
    for (int s = 0; s < n_steps; ++s) {
      ChargeConfig cfg(lattice);
      for (int j = 0; j < lattice.num_sites(); ++j) {
        cfg.set(j, static_cast<ChargeState>(state(rng)));
      }
      sched.append(std::move(cfg), Rational(numerator(rng), denominator(rng)));
    }

    const std::string text = format_schedule(sched);
    const Schedule reparsed = parse_schedule(text);
    CHECK(reparsed == sched);
    CHECK(format_schedule(reparsed) == text);
  }
}

TEST_CASE("parse errors carry line numbers") {
  const auto line_of = [](const std::string& text) {
    try {
      parse_schedule(text);
    } catch (const ScheduleParseError& e) {
      return e.line();
    }
    return -1;
  };

  CHECK(line_of("") == 1);                                  // missing header
  CHECK(line_of("lattice 4\n1 UUUU\n") == 1);               // unknown header
  CHECK(line_of("chain x\n") == 1);                         // bad length
  CHECK(line_of("chain 1\n") == 1);                         // too small
  CHECK(line_of("grid 2\n") == 1);                          // wrong arity
  CHECK(line_of("chain 4\n1 UUD\n") == 2);                  // wrong letter count
  CHECK(line_of("chain 4\n1 UUXD\n") == 2);                 // bad letter
  CHECK(line_of("chain 4\n# ok\n\n1/0 UUDD\n") == 4);       // bad duration
  CHECK(line_of("chain 4\n-1/2 UUDD\n") == 2);              // negative duration
  CHECK(line_of("chain 4\n1 UUDD extra\n") == 2);           // trailing field
  CHECK(line_of("chain 4\n1 UUDD\n1.5 UUDD\n") == 3);       // non-rational
}

TEST_CASE("parsed schedules feed straight into analysis") {
  const Schedule sched = parse_schedule(
      "chain 12\n"
      "1/2 UUDDUUDDUUDD\n"
      "1/2 UDDUUDDUUDDU\n"
      "1 UUUUUUUUUUUU\n");
  const CouplingMatrix c = net_coupling(sched);
  CHECK(c.at(4, 5) == 1);
  CHECK(c.at(4, 6) == 0);
  CHECK(c.at(4, 8) == 2);
}
