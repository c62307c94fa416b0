#include "check_errc.hpp"
#include "support.hpp"

#include "akaprime/batch.hpp"

using namespace akaprime;

TEST_CASE("parallel batch equals the serial reference") {
  const auto subs = akaprime::test::provisioned(8, "ba7c");
  const SubscriberStore base(subs);
  std::vector<Scenario> scenarios;
  for (int i = 0; i < 64; ++i) {
    Scenario sc = akaprime::test::basic_scenario(subs[i % subs.size()], to_hex(Bytes{0x10, static_cast<Byte>(i)}));
    if (i % 4 == 1) {
      AdversaryRule r;
      r.iface = Interface::N1_UE_AMF;
      r.message = "ChallengeResponse";
      r.target = TamperTarget::Res;
      sc.adversary = {r};
    }
    if (i % 4 == 2) sc.faults[Interface::N12_AMF_AUSF] = LinkFaults{0.5, true, 1};
    if (i % 4 == 3) sc.subscriber = "001019999999999";
    scenarios.push_back(sc);
  }

  const auto par = run_batch(scenarios, base);
  const auto ser = run_batch_serial(scenarios, base);
  REQUIRE(par.size() == scenarios.size());
  REQUIRE(ser.size() == scenarios.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    INFO(i);
    CHECK(par[i].error == ser[i].error);
    CHECK(par[i].result.outcome == ser[i].result.outcome);
    CHECK(to_jsonl(par[i].result.trace) == to_jsonl(ser[i].result.trace));
    if (i % 4 == 0) CHECK(par[i].result.outcome == Outcome::Success);
    if (i % 4 == 1) CHECK(par[i].result.outcome == Outcome::HresMismatch);
    if (i % 4 == 3) CHECK_FALSE(par[i].error.empty());
  }
  // The base store is never mutated.
  for (const auto& s : subs) CHECK(base.find(s.supi.imsi())->cred.sqn == s.cred.sqn);
}

TEST_CASE("file-backed batch loads each scenario's subscribers") {
  std::vector<Scenario> scenarios;
  for (const char* name : {"faultless", "autn_tamper", "res_tamper", "missing"}) {
    Scenario sc;
    const auto path = akaprime::test::source_dir() / "scenarios" / (std::string(name) + ".json");
    if (std::filesystem::exists(path)) {
      sc = load_scenario(path);
    } else {
      sc.name = name;
      sc.subscribers = "/nonexistent/subscribers.json";
      sc.rng_seed = Bytes{1};
    }
    scenarios.push_back(sc);
  }
  const auto out = run_batch(scenarios);
  CHECK(out[0].result.outcome == Outcome::Success);
  CHECK(out[1].result.outcome == Outcome::MacFailure);
  CHECK(out[2].result.outcome == Outcome::HresMismatch);
  CHECK_FALSE(out[3].error.empty());
}
