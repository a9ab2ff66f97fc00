#include "permgroup.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <unordered_map>

namespace eqp {

namespace {

struct PermHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (std::uint32_t x : v) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace

Permutation Permutation::identity(std::uint32_t degree) {
  Permutation p;
  p.img.resize(degree);
  for (std::uint32_t i = 0; i < degree; ++i) p.img[i] = i;
  return p;
}

bool Permutation::is_identity() const {
  for (std::uint32_t i = 0; i < degree(); ++i)
    if (img[i] != i) return false;
  return true;
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.degree() != q.degree()) fail(errc::degree_mismatch, "compose: degree mismatch");
  Permutation r;
  r.img.resize(p.degree());
  for (std::uint32_t i = 0; i < p.degree(); ++i) r.img[i] = q.img[p.img[i]];
  return r;
}

Permutation inverse(const Permutation& p) {
  Permutation r;
  r.img.resize(p.degree());
  for (std::uint32_t i = 0; i < p.degree(); ++i) r.img[p.img[i]] = i;
  return r;
}

Permutation make_permutation(std::vector<std::uint32_t> img) {
  std::vector<bool> seen(img.size(), false);
  for (std::uint32_t x : img) {
    if (x >= img.size() || seen[x]) fail(errc::invalid_input, "image table is not a permutation");
    seen[x] = true;
  }
  Permutation p;
  p.img = std::move(img);
  return p;
}

PermGroup::PermGroup(std::uint32_t degree,
                     std::vector<std::pair<std::string, Permutation>> generators,
                     std::size_t element_cap)
    : degree_(degree), gens_(std::move(generators)), element_cap_(element_cap) {
  std::set<std::string> names;
  for (const auto& [name, p] : gens_) {
    if (p.degree() != degree_) fail(errc::degree_mismatch, "generator degree mismatch");
    if (name.empty() || !names.insert(name).second)
      fail(errc::invalid_input, "generator names must be distinct and nonempty");
  }
}

const Permutation& PermGroup::generator(const std::string& name) const {
  for (const auto& [n, p] : gens_)
    if (n == name) return p;
  fail(errc::unknown_generator, "unknown generator: " + name);
}

bool PermGroup::has_generator(const std::string& name) const {
  for (const auto& [n, p] : gens_)
    if (n == name) return true;
  return false;
}

std::vector<Permutation> enumerate_closure(std::uint32_t degree,
                                           const std::vector<Permutation>& gens,
                                           std::size_t element_cap) {
  std::vector<Permutation> elements;
  std::unordered_map<std::vector<std::uint32_t>, std::size_t, PermHash> index;
  elements.push_back(Permutation::identity(degree));
  index.emplace(elements[0].img, 0);
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const Permutation& g : gens) {
      Permutation next = compose(elements[head], g);
      if (index.emplace(next.img, elements.size()).second) {
        if (elements.size() + 1 > element_cap)
          fail(errc::cap_exceeded, "group enumeration exceeded element cap");
        elements.push_back(std::move(next));
      }
    }
  }
  return elements;
}

const std::vector<Permutation>& PermGroup::enumerate_elements() const {
  if (elements_.empty()) {
    std::vector<Permutation> gens;
    for (const auto& [name, p] : gens_) gens.push_back(p);
    elements_ = enumerate_closure(degree_, gens, element_cap_);
  }
  return elements_;
}

std::size_t PermGroup::element_index(const Permutation& p) const {
  const auto& els = enumerate_elements();
  for (std::size_t i = 0; i < els.size(); ++i)
    if (els[i] == p) return i;
  fail(errc::not_in_group, "element is not in the group");
}

bool PermGroup::contains(const Permutation& p) const {
  if (p.degree() != degree_) return false;
  const auto& els = enumerate_elements();
  return std::find(els.begin(), els.end(), p) != els.end();
}

std::vector<std::uint32_t> PermGroup::orbit(std::uint32_t point) const {
  if (point >= degree_) fail(errc::point_out_of_range, "orbit: point out of range");
  std::vector<bool> seen(degree_, false);
  std::vector<std::uint32_t> queue{point};
  seen[point] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (const auto& [name, g] : gens_) {
      std::uint32_t q = g.apply(queue[head]);
      if (!seen[q]) {
        seen[q] = true;
        queue.push_back(q);
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

std::vector<Permutation> PermGroup::stabilizer_generators(std::uint32_t point) const {
  if (point >= degree_) fail(errc::point_out_of_range, "stabilizer: point out of range");
  // Transversal by BFS from the point: t[q] maps point to q.
  std::vector<Permutation> transversal(degree_);
  std::vector<bool> seen(degree_, false);
  std::vector<std::uint32_t> queue{point};
  seen[point] = true;
  transversal[point] = Permutation::identity(degree_);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::uint32_t p = queue[head];
    for (const auto& [name, g] : gens_) {
      std::uint32_t q = g.apply(p);
      if (!seen[q]) {
        seen[q] = true;
        transversal[q] = compose(transversal[p], g);
        queue.push_back(q);
      }
    }
  }
  // Schreier generators t[p]*g*t[g(p)]^-1 over the orbit, BFS order.
  std::vector<Permutation> out;
  std::set<std::vector<std::uint32_t>> dedup;
  for (std::uint32_t p : queue) {
    for (const auto& [name, g] : gens_) {
      std::uint32_t q = g.apply(p);
      Permutation s = compose(compose(transversal[p], g), inverse(transversal[q]));
      if (s.is_identity()) continue;
      if (dedup.insert(s.img).second) out.push_back(std::move(s));
    }
  }
  return out;
}

GenWord PermGroup::word_for_element(const Permutation& target) const {
  if (target.degree() != degree_) fail(errc::degree_mismatch, "word_for_element: degree mismatch");
  // BFS appending letters; FIFO order plus in-order letter expansion makes the
  // first-found word the lexicographically least among shortest ones.
  std::vector<GenLetter> letters;
  std::vector<Permutation> letter_perms;
  for (const auto& [name, p] : gens_) {
    letters.push_back({name, 1});
    letter_perms.push_back(p);
    letters.push_back({name, -1});
    letter_perms.push_back(inverse(p));
  }
  struct Node {
    std::size_t parent;
    std::size_t letter;
  };
  std::vector<Permutation> elements{Permutation::identity(degree_)};
  std::vector<Node> nodes{{SIZE_MAX, SIZE_MAX}};
  std::unordered_map<std::vector<std::uint32_t>, std::size_t, PermHash> index;
  index.emplace(elements[0].img, 0);
  auto build_word = [&](std::size_t i) {
    GenWord w;
    while (nodes[i].parent != SIZE_MAX) {
      w.push_back(letters[nodes[i].letter]);
      i = nodes[i].parent;
    }
    std::reverse(w.begin(), w.end());
    return w;
  };
  if (target == elements[0]) return {};
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (std::size_t li = 0; li < letters.size(); ++li) {
      Permutation next = compose(elements[head], letter_perms[li]);
      if (index.emplace(next.img, elements.size()).second) {
        if (elements.size() + 1 > element_cap_)
          fail(errc::cap_exceeded, "word search exceeded element cap");
        elements.push_back(next);
        nodes.push_back({head, li});
        if (next == target) return build_word(elements.size() - 1);
      }
    }
  }
  fail(errc::not_in_group, "word_for_element: target is not in the group");
}

Permutation PermGroup::evaluate(const GenWord& w) const {
  Permutation acc = Permutation::identity(degree_);
  for (const auto& [name, exp] : w) {
    const Permutation& g = generator(name);
    acc = compose(acc, exp >= 0 ? g : inverse(g));
  }
  return acc;
}

std::size_t subgroup_order(std::uint32_t degree, const std::vector<Permutation>& gens,
                           std::size_t element_cap) {
  return enumerate_closure(degree, gens, element_cap).size();
}

}  // namespace eqp
