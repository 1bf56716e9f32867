#include "bell/scenario.hpp"

#include <algorithm>
#include <sstream>

#include "bell/errors.hpp"

namespace bell {

BellScenario::BellScenario(std::vector<int> settings)
    : settings_per_party(std::move(settings)) {
  if (settings_per_party.size() < 2)
    throw SpecError("scenario needs at least 2 parties");
  for (int m : settings_per_party)
    if (m < 1) throw SpecError("every settings count must be >= 1");
}

BellScenario BellScenario::parse(const std::string& csv) {
  std::vector<int> settings;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      int v = std::stoi(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      settings.push_back(v);
    } catch (const std::exception&) {
      throw SpecError("bad settings list: '" + csv + "'");
    }
  }
  return BellScenario(std::move(settings));
}

long BellScenario::dimension() const {
  long d = 1;
  for (int m : settings_per_party) d *= m + 1;
  return d - 1;
}

long BellScenario::vertex_count() const {
  long n = 1;
  for (int m : settings_per_party) n <<= m;
  return n;
}

long BellScenario::setting_tuples() const {
  long n = 1;
  for (int m : settings_per_party) n *= m;
  return n;
}

std::string BellScenario::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < settings_per_party.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(settings_per_party[i]);
  }
  return out;
}

std::string Term::to_string() const {
  std::string out;
  for (auto [party, setting] : members) {
    out += static_cast<char>('a' + party);
    out += std::to_string(setting);
  }
  return out;
}

bool TermLess::operator()(const Term& lhs, const Term& rhs) const {
  if (lhs.members.size() != rhs.members.size())
    return lhs.members.size() < rhs.members.size();
  // party tuple first, then setting tuple
  for (std::size_t i = 0; i < lhs.members.size(); ++i) {
    if (lhs.members[i].first != rhs.members[i].first)
      return lhs.members[i].first < rhs.members[i].first;
  }
  for (std::size_t i = 0; i < lhs.members.size(); ++i) {
    if (lhs.members[i].second != rhs.members[i].second)
      return lhs.members[i].second < rhs.members[i].second;
  }
  return false;
}

Parametrization::Parametrization(BellScenario s) : scenario(std::move(s)) {
  const int n = scenario.parties();
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> parties;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) parties.push_back(i);
    // enumerate setting choices for the chosen parties, last party fastest
    std::vector<int> choice(parties.size(), 0);
    while (true) {
      Term t;
      for (std::size_t k = 0; k < parties.size(); ++k)
        t.members.emplace_back(parties[k], choice[k]);
      terms.push_back(std::move(t));
      int k = static_cast<int>(parties.size()) - 1;
      while (k >= 0 && ++choice[k] == scenario.settings(parties[k])) {
        choice[k] = 0;
        --k;
      }
      if (k < 0) break;
    }
  }
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return TermLess{}(a, b); });
  for (int i = 0; i < static_cast<int>(terms.size()); ++i) index_[terms[i]] = i;
}

int Parametrization::index_of(const Term& t) const {
  auto it = index_.find(t);
  return it == index_.end() ? -1 : it->second;
}

DeterministicStrategy DeterministicStrategy::from_index(const BellScenario& s,
                                                        long index) {
  DeterministicStrategy strat{s, {}};
  strat.outcome.resize(s.parties());
  int total_bits = 0;
  for (int m : s.settings_per_party) total_bits += m;
  int bit = total_bits - 1;
  for (int party = 0; party < s.parties(); ++party) {
    strat.outcome[party].resize(s.settings(party));
    for (int x = 0; x < s.settings(party); ++x) {
      strat.outcome[party][x] = static_cast<uint8_t>((index >> bit) & 1);
      --bit;
    }
  }
  return strat;
}

long DeterministicStrategy::index() const {
  long idx = 0;
  for (const auto& per_party : outcome)
    for (uint8_t o : per_party) idx = (idx << 1) | o;
  return idx;
}

Behavior behavior_of(const DeterministicStrategy& strat) {
  Parametrization par(strat.scenario);
  Behavior b{strat.scenario, RatVec(par.size())};
  for (int i = 0; i < par.size(); ++i) {
    bool all_zero = true;
    for (auto [party, setting] : par.terms[i].members)
      if (strat.outcome[party][setting] != 0) all_zero = false;
    b.coords[i] = all_zero ? 1 : 0;
  }
  return b;
}

std::vector<Behavior> enumerate_vertices(const BellScenario& s, long cap) {
  const long count = s.vertex_count();
  if (count > cap)
    throw CapacityError("vertex count " + std::to_string(count) +
                        " exceeds cap " + std::to_string(cap));
  std::vector<Behavior> vertices;
  vertices.reserve(count);
  for (long idx = 0; idx < count; ++idx)
    vertices.push_back(behavior_of(DeterministicStrategy::from_index(s, idx)));
  return vertices;
}

long FullJoint::setting_index(const std::vector<int>& settings) const {
  long idx = 0;
  for (int party = 0; party < scenario.parties(); ++party)
    idx = idx * scenario.settings(party) + settings[party];
  return idx;
}

std::vector<int> FullJoint::settings_of_index(long idx) const {
  std::vector<int> settings(scenario.parties());
  for (int party = scenario.parties() - 1; party >= 0; --party) {
    settings[party] = static_cast<int>(idx % scenario.settings(party));
    idx /= scenario.settings(party);
  }
  return settings;
}

FullJoint FullJoint::uniform(const BellScenario& s) {
  FullJoint joint{s, {}};
  const long outcomes = 1L << s.parties();
  joint.p.assign(s.setting_tuples(), RatVec(outcomes, Rat(1, outcomes)));
  return joint;
}

FullJoint FullJoint::of_strategy(const DeterministicStrategy& strat) {
  const BellScenario& s = strat.scenario;
  FullJoint joint{s, {}};
  const long outcomes = 1L << s.parties();
  joint.p.assign(s.setting_tuples(), RatVec(outcomes, 0));
  for (long si = 0; si < s.setting_tuples(); ++si) {
    std::vector<int> settings = joint.settings_of_index(si);
    long bits = 0;
    for (int party = 0; party < s.parties(); ++party)
      bits = (bits << 1) | strat.outcome[party][settings[party]];
    joint.p[si][bits] = 1;
  }
  return joint;
}

namespace {

void require_normalized(const FullJoint& joint) {
  for (long si = 0; si < joint.scenario.setting_tuples(); ++si) {
    Rat sum = 0;
    for (const Rat& q : joint.p[si]) sum += q;
    if (sum != 1) {
      std::string settings;
      for (int x : joint.settings_of_index(si))
        settings += (settings.empty() ? "" : ",") + std::to_string(x);
      throw NormalizationError("setting tuple (" + settings + ") sums to " +
                               sum.get_str() + ", expected 1");
    }
  }
}

}  // namespace

NoSignalingReport check_no_signaling(const FullJoint& joint) {
  require_normalized(joint);
  const BellScenario& s = joint.scenario;
  const int n = s.parties();
  NoSignalingReport report;
  // for each party j: the joint of the others, marginalized over j's outcome,
  // must not depend on j's setting
  for (int j = 0; j < n; ++j) {
    if (s.settings(j) < 2) continue;
    for (long si = 0; si < s.setting_tuples(); ++si) {
      std::vector<int> settings = joint.settings_of_index(si);
      if (settings[j] != 0) continue;  // compare setting 0 against the rest
      for (int alt = 1; alt < s.settings(j); ++alt) {
        std::vector<int> settings2 = settings;
        settings2[j] = alt;
        const long si2 = joint.setting_index(settings2);
        const long outcomes = 1L << n;
        const long jbit = 1L << (n - 1 - j);
        for (long bits = 0; bits < outcomes; ++bits) {
          if (bits & jbit) continue;
          Rat m1 = joint.p[si][bits] + joint.p[si][bits | jbit];
          Rat m2 = joint.p[si2][bits] + joint.p[si2][bits | jbit];
          if (m1 != m2) {
            report.ok = false;
            std::string others;
            for (int k = 0; k < n; ++k) {
              if (k == j) continue;
              others += static_cast<char>('a' + k);
              others += (bits & (1L << (n - 1 - k))) ? '1' : '0';
            }
            report.violations.push_back(
                "party " + std::string(1, static_cast<char>('a' + j)) +
                ": marginal of (" + others + ") differs between settings " +
                std::to_string(settings[j]) + " and " + std::to_string(alt));
          }
        }
      }
    }
  }
  return report;
}

Behavior project_to_parametrization(const FullJoint& joint) {
  NoSignalingReport ns = check_no_signaling(joint);
  if (!ns.ok)
    throw SignalingError("signaling input: " + ns.violations.front());
  const BellScenario& s = joint.scenario;
  Parametrization par(s);
  Behavior b{s, RatVec(par.size())};
  const int n = s.parties();
  for (int i = 0; i < par.size(); ++i) {
    // complete the term's settings arbitrarily (setting 0 elsewhere);
    // no-signaling makes the choice irrelevant
    std::vector<int> settings(n, 0);
    long zero_mask = 0;
    for (auto [party, setting] : par.terms[i].members) {
      settings[party] = setting;
      zero_mask |= 1L << (n - 1 - party);
    }
    const long si = joint.setting_index(settings);
    Rat sum = 0;
    for (long bits = 0; bits < (1L << n); ++bits)
      if ((bits & zero_mask) == 0) sum += joint.p[si][bits];
    b.coords[i] = sum;
  }
  return b;
}

}  // namespace bell
