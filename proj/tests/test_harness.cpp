#include <algorithm>
#include <numeric>
#include <random>

#include "check_errc.hpp"
#include "support.hpp"

#include "akaprime/harness.hpp"

using namespace akaprime;
using akaprime::test::basic_scenario;
using akaprime::test::event_names;

namespace {

struct Fixture {
  std::vector<SubscriberRecord> subs = akaprime::test::provisioned(3, "4a11");
  SubscriberStore store{subs};

  RunResult run(const Scenario& sc) {
    SubscriberStore fresh(subs);
    return run_scenario(sc, fresh);
  }
};

AdversaryRule flip(Interface iface, std::string message, TamperTarget target, std::size_t byte, int bit) {
  AdversaryRule r;
  r.iface = iface;
  r.message = std::move(message);
  r.action = AdversaryAction::FlipBit;
  r.target = target;
  r.byte_offset = byte;
  r.bit = bit;
  return r;
}

void check_conservation(const RunResult& r) {
  const auto& c = r.counters;
  CHECK(c.sent == c.delivered + c.dropped + c.pending);
  CHECK(c.sent == r.messages);
  std::size_t logged = 0;
  for (const auto& e : r.trace) logged += e.kind == "message" && !e.has_flag("replayed");
  CHECK(logged == c.sent - c.replayed);
}

std::size_t first_flagged(const RunResult& r, std::string_view flag) {
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    if (r.trace[i].has_flag(flag)) return i;
  }
  return r.trace.size();
}

}  // namespace

TEST_CASE("faultless EAP-AKA' run") {
  Fixture fx;
  const RunResult r = fx.run(basic_scenario(fx.subs[1]));
  CHECK(r.outcome == Outcome::Success);
  CHECK(r.keys_agree());
  CHECK(r.method == Method::EapAkaPrime);
  CHECK(r.ue.state == UeState::Authenticated);
  CHECK(r.amf.state == AmfState::Done);
  CHECK(r.ausf.state == AusfState::Done);
  check_conservation(r);

  const std::vector<std::string> expected{
      "IdentityRequest", "IdentityResponse", "AuthRequest",       "AuthInfoRequest",  "MethodSelected",
      "AvGenerated",     "AuthInfoResponse", "XresStored",        "ChallengeForward", "ChallengeForward",
      "ChallengeResponse", "HresVerified",   "ResVerifyRequest",  "ResVerified",      "SuccessNotice",
      "SuccessNotice"};
  CHECK(event_names(r.trace) == expected);
}

TEST_CASE("the twelve narrative steps appear once each, in order") {
  Fixture fx;
  for (const auto& sub : fx.subs) {
    const RunResult r = fx.run(basic_scenario(sub, "77"));
    std::vector<int> steps;
    for (const auto& e : r.trace) {
      if (auto s = narrative_step(e)) steps.push_back(*s);
    }
    std::vector<int> want(12);
    std::iota(want.begin(), want.end(), 1);
    CHECK(steps == want);
  }
}

TEST_CASE("ticks never decrease and messages arrive one tick later") {
  Fixture fx;
  Scenario sc = basic_scenario(fx.subs[0]);
  sc.faults[Interface::N1_UE_AMF] = LinkFaults{0.0, true, 2};
  const RunResult r = fx.run(sc);
  CHECK(r.outcome == Outcome::Success);
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i - 1].tick <= r.trace[i].tick);
  CHECK(r.ticks > fx.run(basic_scenario(fx.subs[0])).ticks);
}

TEST_CASE("runs are deterministic in the seed") {
  Fixture fx;
  const Scenario sc = basic_scenario(fx.subs[2], "abcdef");
  const RunResult a = fx.run(sc);
  const RunResult b = fx.run(sc);
  CHECK(to_jsonl(a.trace) == to_jsonl(b.trace));
  CHECK(a.av == b.av);

  const RunResult c = fx.run(basic_scenario(fx.subs[2], "abcdf0"));
  REQUIRE(c.av);
  CHECK(c.av->rand != a.av->rand);
  CHECK(a.trace.front().session != c.trace.front().session);
}

TEST_CASE("5G-AKA run agrees on keys and skips EAP") {
  Fixture fx;
  SubscriberStore store(fx.subs);
  const RunResult r = run_5g_aka_flow(basic_scenario(fx.subs[0]), store);
  CHECK(r.outcome == Outcome::Success);
  CHECK(r.method == Method::FiveGAka);
  CHECK(r.keys_agree());
  CHECK_FALSE(r.ue.keys->eap);
  for (const auto& e : r.trace) CHECK(e.digest.empty());
  check_conservation(r);
}

TEST_CASE("any AUTN bit flip on N1 ends in MAC_FAILURE") {
  Fixture fx;
  std::mt19937_64 rng(0xa171);
  for (int i = 0; i < 64; ++i) {
    Scenario sc = basic_scenario(fx.subs[0]);
    sc.adversary = {flip(Interface::N1_UE_AMF, "ChallengeForward", TamperTarget::Autn, rng() % 16,
                         static_cast<int>(rng() % 8))};
    const RunResult r = fx.run(sc);
    CHECK(r.outcome == Outcome::MacFailure);
    CHECK(first_flagged(r, "tampered") < r.trace.size());
    CHECK_FALSE(r.ue.keys);
    CHECK(r.ausf.state != AusfState::Done);
    check_conservation(r);
  }
}

TEST_CASE("RES tampered on N1 is caught by the AMF without reaching the AUSF") {
  Fixture fx;
  for (std::size_t byte = 0; byte < 8; ++byte) {
    Scenario sc = basic_scenario(fx.subs[1]);
    sc.adversary = {flip(Interface::N1_UE_AMF, "ChallengeResponse", TamperTarget::Res, byte, 5)};
    const RunResult r = fx.run(sc);
    CHECK(r.outcome == Outcome::HresMismatch);
    const std::size_t at = first_flagged(r, "tampered");
    REQUIRE(at < r.trace.size());
    for (std::size_t i = at + 1; i < r.trace.size(); ++i) {
      CHECK(r.trace[i].from != "AUSF");
      CHECK(r.trace[i].to != "AUSF");
    }
    CHECK(r.ausf.state == AusfState::AwaitRes);
  }
}

TEST_CASE("forged RES on N12 is caught by the AUSF") {
  Fixture fx;
  Scenario sc = basic_scenario(fx.subs[1]);
  sc.adversary = {flip(Interface::N12_AMF_AUSF, "ResVerifyRequest", TamperTarget::Res, 0, 0)};
  const RunResult r = fx.run(sc);
  CHECK(r.outcome == Outcome::XresMismatch);
  CHECK_FALSE(r.amf.k_seaf);
}

TEST_CASE("replayed challenge is refused as stale") {
  Fixture fx;
  Scenario sc = basic_scenario(fx.subs[0]);
  AdversaryRule replay;
  replay.iface = Interface::N1_UE_AMF;
  replay.message = "ChallengeForward";
  replay.action = AdversaryAction::Replay;
  sc.adversary = {replay};
  const RunResult r = fx.run(sc);
  CHECK(r.outcome == Outcome::SqnFailure);
  CHECK(r.counters.replayed == 1);
  CHECK(first_flagged(r, "replayed") < r.trace.size());
  check_conservation(r);
}

TEST_CASE("a black-holed link times out") {
  Fixture fx;
  Scenario sc = basic_scenario(fx.subs[0]);
  sc.faults[Interface::N12_AMF_AUSF] = LinkFaults{1.0, false, 0};
  sc.tick_budget = 50;
  const RunResult r = fx.run(sc);
  CHECK(r.outcome == Outcome::Timeout);
  CHECK(r.counters.dropped >= 1);
  CHECK(r.ticks <= 50);
  check_conservation(r);
}

TEST_CASE("a rule that matches nothing leaves the trace unchanged") {
  Fixture fx;
  Scenario sc = basic_scenario(fx.subs[2]);
  const RunResult clean = fx.run(sc);
  sc.adversary = {flip(Interface::N13_AUSF_UDM, "NoSuchMessage", TamperTarget::Rand, 0, 0),
                  flip(Interface::N1_UE_AMF, "IdentityRequest", TamperTarget::Res, 0, 0)};
  const RunResult r = fx.run(sc);
  CHECK(to_jsonl(r.trace) == to_jsonl(clean.trace));
}

TEST_CASE("network declaration") {
  const SimNetwork net;
  CHECK(net.declared(Interface::N1_UE_AMF));
  CHECK(net.declared(Interface::N12_AMF_AUSF));
  CHECK(net.declared(Interface::N13_AUSF_UDM));
  CHECK_FALSE(net.declared(Interface::N6_DNAAA));
  AdversaryRule rule;
  rule.iface = Interface::N6_DNAAA;
  CHECK_ERRC(inject(net, rule), Errc::ConfigError);
  CHECK_ERRC(net.faults(Interface::N6_DNAAA), Errc::ConfigError);
  rule.iface = Interface::N12_AMF_AUSF;
  CHECK(inject(net, rule).rules().size() == 1);

  Fixture fx;
  Scenario sc = basic_scenario(fx.subs[0]);
  sc.faults[Interface::N6_DNAAA] = LinkFaults{};
  CHECK_ERRC(fx.run(sc), Errc::ConfigError);
  sc = basic_scenario(fx.subs[0]);
  sc.adversary = {rule};
  sc.adversary[0].iface = Interface::N6_DNAAA;
  CHECK_ERRC(fx.run(sc), Errc::ConfigError);
}

TEST_CASE("scenario configuration errors") {
  Fixture fx;
  Scenario sc = basic_scenario(fx.subs[0]);
  sc.rng_seed.clear();
  CHECK_ERRC(fx.run(sc), Errc::ConfigError);
  sc = basic_scenario(fx.subs[0]);
  sc.tick_budget = 0;
  CHECK_ERRC(fx.run(sc), Errc::ConfigError);
  sc = basic_scenario(fx.subs[0]);
  sc.subscriber = "999999999999999";
  CHECK_ERRC(fx.run(sc), Errc::ConfigError);
  SubscriberStore empty;
  CHECK_ERRC(run_scenario(basic_scenario(fx.subs[0]), empty), Errc::ConfigError);
}

TEST_CASE("method policy outcomes") {
  Fixture fx;
  std::vector<SubscriberRecord> subs = fx.subs;
  subs[0].allowed_methods = {Method::EapTls};
  SubscriberStore store(subs);
  CHECK(run_scenario(basic_scenario(subs[0]), store).outcome == Outcome::MethodRejected);
}

TEST_CASE("SQN advances across sessions sharing a store") {
  Fixture fx;
  SubscriberStore store(fx.subs);
  const Sqn before = store.find(fx.subs[0].supi.imsi())->cred.sqn;
  const RunResult a = run_scenario(basic_scenario(fx.subs[0]), store);
  const RunResult b = run_scenario(basic_scenario(fx.subs[0]), store);
  CHECK(a.outcome == Outcome::Success);
  CHECK(b.outcome == Outcome::Success);
  CHECK(store.find(fx.subs[0].supi.imsi())->cred.sqn == before + 2);
  CHECK(a.av->rand != b.av->rand);
}

TEST_CASE("trace JSONL round trip") {
  Fixture fx;
  Scenario sc = basic_scenario(fx.subs[0]);
  AdversaryRule replay;
  replay.iface = Interface::N1_UE_AMF;
  replay.message = "ChallengeForward";
  replay.action = AdversaryAction::Replay;
  sc.adversary = {replay};
  const RunResult r = fx.run(sc);
  const std::string text = to_jsonl(r.trace);
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(r.trace.size()));
  const auto back = parse_jsonl(text);
  REQUIRE(back.size() == r.trace.size());
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(to_json(back[i]) == to_json(r.trace[i]));
  CHECK(to_jsonl(back) == text);
  CHECK_ERRC(parse_jsonl("{\"tick\":\n"), Errc::ConfigError);
}

TEST_CASE("enum names round-trip") {
  for (int i = 0; i <= static_cast<int>(Outcome::ProtocolError); ++i) {
    const auto o = static_cast<Outcome>(i);
    CHECK(outcome_from_string(to_string(o)) == o);
  }
  CHECK(outcome_of(FailureReason::HresMismatch) == Outcome::HresMismatch);
  CHECK(adversary_action_from_string("REPLAY") == AdversaryAction::Replay);
  CHECK(tamper_target_from_string("HXRES") == TamperTarget::Hxres);
  CHECK_ERRC(outcome_from_string("MAYBE"), Errc::ConfigError);
}
