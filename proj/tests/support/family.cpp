#include "support/family.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "kgbench/util/random.hpp"

namespace kgbench::fixtures {

namespace {

struct Person {
  std::string label;
  bool male = false;
  int father = -1;
  int mother = -1;
  int spouse = -1;
  bool pinned = false;
};

class Family {
 public:
  explicit Family(std::uint64_t seed) : rng_(seed) {}

  int person(bool male, bool pinned, std::string label = {}) {
    if (label.empty()) label = fresh_label();
    people_.push_back(Person{std::move(label), male, -1, -1, -1, pinned});
    return static_cast<int>(people_.size()) - 1;
  }

  void marry(int a, int b) {
    people_[a].spouse = b;
    people_[b].spouse = a;
  }

  int child(int father, int mother, bool male, std::string label = {}) {
    int c = person(male, people_[father].pinned, std::move(label));
    people_[c].father = father;
    people_[c].mother = mother;
    return c;
  }

  util::Rng& rng() { return rng_; }
  bool male(int x) const { return people_[x].male; }

  kg::KnowledgeGraph emit(double noise) {
    kg::GraphBuilder builder;
    auto fact = [&](int s, const char* p, int o) {
      const bool keep = (people_[s].pinned && people_[o].pinned) || rng_.below(1000000) >= noise * 1000000;
      if (keep) builder.add(people_[s].label, p, people_[o].label);
    };
    auto siblings = [&](int x) {
      std::vector<int> out;
      if (people_[x].father < 0) return out;
      for (int y = 0; y < static_cast<int>(people_.size()); ++y) {
        if (y != x && people_[y].father == people_[x].father && people_[y].mother == people_[x].mother) out.push_back(y);
      }
      return out;
    };
    for (int x = 0; x < static_cast<int>(people_.size()); ++x) {
      const Person& p = people_[x];
      if (p.spouse >= 0) fact(x, p.male ? "husbandOf" : "wifeOf", p.spouse);
      for (int parent : {p.father, p.mother}) {
        if (parent < 0) continue;
        fact(parent, people_[parent].male ? "fatherOf" : "motherOf", x);
        fact(x, p.male ? "sonOf" : "daughterOf", parent);
        for (int s : siblings(parent)) {
          fact(s, people_[s].male ? "uncleOf" : "auntOf", x);
          fact(x, p.male ? "nephewOf" : "nieceOf", s);
        }
      }
      for (int s : siblings(x)) fact(x, p.male ? "brotherOf" : "sisterOf", s);
    }
    return std::move(builder).build();
  }

 private:
  std::string fresh_label() {
    static constexpr std::array<int, 6> kReserved{14, 138, 139, 205, 2973, 2974};
    while (std::find(kReserved.begin(), kReserved.end(), next_label_) != kReserved.end()) ++next_label_;
    return std::to_string(next_label_++);
  }

  util::Rng rng_;
  std::vector<Person> people_;
  int next_label_ = 0;
};

}  // namespace

kg::KnowledgeGraph family_graph(const FamilySpec& spec) {
  Family f(spec.seed);
  auto& rng = f.rng();

  // Pinned family from the worked example.
  int gf = f.person(true, true);
  int gm = f.person(false, true);
  f.marry(gf, gm);
  int p139 = f.child(gf, gm, true, "139");
  for (const char* label : {"205", "138", "2973", "2974"}) {
    int brother = f.child(gf, gm, true, label);
    if (std::string(label) == "205") {
      int wife = f.person(false, true);
      f.marry(brother, wife);
      f.child(brother, wife, false);
      f.child(brother, wife, true);
    }
  }
  int w139 = f.person(false, true);
  f.marry(p139, w139);
  f.child(p139, w139, true, "14");

  for (std::size_t i = 0; i < spec.families; ++i) {
    int father = f.person(true, false);
    int mother = f.person(false, false);
    f.marry(father, mother);
    const std::size_t kids = 2 + rng.below(3);
    std::vector<int> children;
    for (std::size_t k = 0; k < kids; ++k) children.push_back(f.child(father, mother, rng.coin()));
    for (int c : children) {
      if (rng.below(10) >= 7) continue;
      // Spouses come from outside the graph and have no siblings.
      const bool c_male = f.male(c);
      int spouse = f.person(!c_male, false);
      int husband = c_male ? c : spouse;
      int wife = c_male ? spouse : c;
      f.marry(husband, wife);
      const std::size_t grandkids = 1 + rng.below(3);
      for (std::size_t g = 0; g < grandkids; ++g) f.child(husband, wife, rng.coin());
    }
  }
  return f.emit(spec.noise);
}

}  // namespace kgbench::fixtures
