#include "recur/symbolic.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <unordered_set>

#include "recur/error.hpp"

namespace recur {

namespace {

std::uint64_t checked_power(std::size_t base, std::size_t exponent) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    require(out <= std::numeric_limits<std::uint64_t>::max() / base,
            ErrorKind::InvalidArgument,
            "block codes overflow 64 bits; reduce the block length");
    out *= base;
  }
  return out;
}

std::uint64_t encode(std::span<const Symbol> word, std::size_t base) {
  std::uint64_t code = 0;
  for (Symbol s : word) code = code * base + s;
  return code;
}

// Iterative Tarjan; returns the component id of every state.
std::vector<std::size_t> tarjan(const SubshiftOfFiniteType& sft,
                                std::size_t& component_count) {
  const std::size_t n = sft.alphabet_size();
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<Symbol> stack;
  std::vector<std::pair<Symbol, std::size_t>> call;  // (state, next edge)
  std::size_t counter = 0;
  component_count = 0;
  for (Symbol root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      auto succ = sft.successors(v);
      if (edge < succ.size()) {
        Symbol w = succ[edge++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        Symbol w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = component_count;
        } while (w != v);
        ++component_count;
      }
      Symbol finished = v;
      call.pop_back();
      if (!call.empty()) {
        Symbol parent = call.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  return comp;
}

}  // namespace

SubshiftOfFiniteType SubshiftOfFiniteType::full_shift(std::size_t k) {
  require(k > 0, ErrorKind::InvalidArgument, "empty alphabet");
  std::vector<Edge> edges;
  for (Symbol i = 0; i < k; ++i)
    for (Symbol j = 0; j < k; ++j) edges.emplace_back(i, j);
  return from_edges(k, std::move(edges));
}

SubshiftOfFiniteType SubshiftOfFiniteType::golden_mean() {
  return from_edges(2, {{0, 0}, {0, 1}, {1, 0}});
}

SubshiftOfFiniteType SubshiftOfFiniteType::from_matrix(
    const std::vector<std::vector<int>>& matrix) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    require(matrix[i].size() == matrix.size(), ErrorKind::InvalidArgument,
            "transition matrix must be square");
    for (std::size_t j = 0; j < matrix.size(); ++j) {
      require(matrix[i][j] == 0 || matrix[i][j] == 1,
              ErrorKind::InvalidArgument, "transition matrix must be 0/1");
      if (matrix[i][j]) edges.emplace_back(i, j);
    }
  }
  return from_edges(matrix.size(), std::move(edges));
}

SubshiftOfFiniteType SubshiftOfFiniteType::from_edges(std::size_t n,
                                                      std::vector<Edge> edges) {
  std::vector<std::uint64_t> codes(n);
  std::iota(codes.begin(), codes.end(), 0);
  return from_blocks(n, 1, std::move(codes), std::move(edges));
}

SubshiftOfFiniteType SubshiftOfFiniteType::from_blocks(
    std::size_t base_alphabet, std::size_t block_length,
    std::vector<std::uint64_t> codes, std::vector<Edge> edges) {
  require(!codes.empty(), ErrorKind::InvalidArgument, "empty alphabet");
  require(base_alphabet > 0 && block_length > 0, ErrorKind::InvalidArgument,
          "bad block presentation");
  require(std::is_sorted(codes.begin(), codes.end()) &&
              std::adjacent_find(codes.begin(), codes.end()) == codes.end(),
          ErrorKind::InvalidArgument, "block codes must be sorted and unique");
  require(codes.back() < checked_power(base_alphabet, block_length),
          ErrorKind::InvalidArgument, "block code out of range");
  SubshiftOfFiniteType sft;
  sft.base_alphabet_ = base_alphabet;
  sft.block_length_ = block_length;
  sft.codes_ = std::move(codes);
  sft.build(std::move(edges));
  return sft;
}

void SubshiftOfFiniteType::build(std::vector<Edge> edges) {
  const std::size_t n = codes_.size();
  for (auto [a, b] : edges) {
    require(a < n && b < n, ErrorKind::InvalidArgument,
            "transition references a symbol outside the alphabet");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  for (auto [a, b] : edges) {
    ++offsets_[a + 1];
    ++in_offsets_[b + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  std::partial_sum(in_offsets_.begin(), in_offsets_.end(),
                   in_offsets_.begin());
  targets_.resize(edges.size());
  sources_.resize(edges.size());
  auto fill = in_offsets_;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    targets_[e] = edges[e].second;
    sources_[fill[edges[e].second]++] = edges[e].first;
  }
  for (Symbol s = 0; s < n; ++s) {
    require(offsets_[s + 1] > offsets_[s], ErrorKind::InvalidArgument,
            "symbol " + std::to_string(s) + " has no successor");
    require(in_offsets_[s + 1] > in_offsets_[s], ErrorKind::InvalidArgument,
            "symbol " + std::to_string(s) + " has no predecessor");
  }

  std::size_t components = 0;
  tarjan(*this, components);
  irreducible_ = components == 1;
  primitive_ = false;
  if (irreducible_) {
    // Period = gcd of level differences along edges of a BFS tree.
    std::vector<std::int64_t> level(n, -1);
    std::deque<Symbol> queue{0};
    level[0] = 0;
    std::int64_t period = 0;
    while (!queue.empty()) {
      Symbol v = queue.front();
      queue.pop_front();
      for (Symbol w : successors(v)) {
        if (level[w] < 0) {
          level[w] = level[v] + 1;
          queue.push_back(w);
        } else {
          period = std::gcd(period, std::abs(level[v] + 1 - level[w]));
        }
      }
    }
    primitive_ = period == 1;
  }
}

bool SubshiftOfFiniteType::allows(Symbol from, Symbol to) const {
  if (from >= alphabet_size() || to >= alphabet_size()) return false;
  auto succ = successors(from);
  return std::binary_search(succ.begin(), succ.end(), to);
}

std::optional<Symbol> SubshiftOfFiniteType::state_of_code(
    std::uint64_t code) const {
  auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
  if (it == codes_.end() || *it != code) return std::nullopt;
  return static_cast<Symbol>(it - codes_.begin());
}

Word SubshiftOfFiniteType::block(Symbol state) const {
  std::vector<Symbol> out(block_length_);
  std::uint64_t code = codes_.at(state);
  for (std::size_t i = block_length_; i-- > 0;) {
    out[i] = static_cast<Symbol>(code % base_alphabet_);
    code /= base_alphabet_;
  }
  return Word(std::move(out), base_alphabet_);
}

std::pair<Symbol, Symbol> SubshiftOfFiniteType::states_with_prefix(
    const Word& prefix) const {
  require(prefix.size() <= block_length_, ErrorKind::InvalidArgument,
          "prefix longer than the block length");
  const std::uint64_t scale =
      checked_power(base_alphabet_, block_length_ - prefix.size());
  const std::uint64_t lo = encode(prefix.symbols(), base_alphabet_) * scale;
  const std::uint64_t hi = lo + scale;
  auto first = std::lower_bound(codes_.begin(), codes_.end(), lo);
  auto last = std::lower_bound(first, codes_.end(), hi);
  return {static_cast<Symbol>(first - codes_.begin()),
          static_cast<Symbol>(last - codes_.begin())};
}

std::optional<std::vector<Symbol>> SubshiftOfFiniteType::state_path(
    const Word& base) const {
  if (base.size() < block_length_) return std::nullopt;
  for (Symbol s : base.symbols())
    if (s >= base_alphabet_) return std::nullopt;
  std::vector<Symbol> path;
  path.reserve(base.size() - block_length_ + 1);
  auto symbols = base.symbols();
  for (std::size_t i = 0; i + block_length_ <= base.size(); ++i) {
    auto state = state_of_code(encode(symbols.subspan(i, block_length_),
                                      base_alphabet_));
    if (!state) return std::nullopt;
    if (!path.empty() && !allows(path.back(), *state)) return std::nullopt;
    path.push_back(*state);
  }
  return path;
}

std::vector<SubshiftOfFiniteType::Edge> SubshiftOfFiniteType::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (Symbol s = 0; s < alphabet_size(); ++s)
    for (Symbol t : successors(s)) out.emplace_back(s, t);
  return out;
}

std::vector<std::vector<Symbol>> recurrent_components(
    const SubshiftOfFiniteType& sft) {
  std::size_t count = 0;
  auto comp = tarjan(sft, count);
  std::vector<std::vector<Symbol>> groups(count);
  for (Symbol s = 0; s < sft.alphabet_size(); ++s) groups[comp[s]].push_back(s);
  std::vector<std::vector<Symbol>> out;
  for (auto& g : groups) {
    bool cyclic = g.size() > 1 || sft.allows(g.front(), g.front());
    if (cyclic) out.push_back(std::move(g));
  }
  return out;
}

SubshiftOfFiniteType recode(const SubshiftOfFiniteType& sft,
                            std::size_t length) {
  const std::size_t block = sft.block_length();
  require(length >= block, ErrorKind::InvalidArgument,
          "cannot recode to a shorter block length");
  if (length == block) return sft;
  const std::size_t base = sft.base_alphabet();
  const std::uint64_t window = checked_power(base, block);
  checked_power(base, length);

  // Depth-first enumeration of state paths with length - block + 1 states.
  const std::size_t steps = length - block;
  std::vector<std::uint64_t> codes;
  std::vector<std::pair<Symbol, std::size_t>> stack;  // (state, depth)
  std::vector<std::uint64_t> prefix_code(steps + 1);
  for (Symbol s = 0; s < sft.alphabet_size(); ++s) {
    stack.emplace_back(s, 0);
    while (!stack.empty()) {
      auto [state, depth] = stack.back();
      stack.pop_back();
      const std::uint64_t code =
          depth == 0 ? sft.code(state)
                     : prefix_code[depth - 1] * base + sft.code(state) % base;
      prefix_code[depth] = code;
      if (depth == steps) {
        codes.push_back(code);
        continue;
      }
      auto succ = sft.successors(state);
      for (auto it = succ.rbegin(); it != succ.rend(); ++it)
        stack.emplace_back(*it, depth + 1);
    }
  }
  std::sort(codes.begin(), codes.end());

  const std::uint64_t keep = checked_power(base, length - 1);
  std::vector<SubshiftOfFiniteType::Edge> edges;
  for (Symbol u = 0; u < codes.size(); ++u) {
    auto last = sft.state_of_code(codes[u] % window);
    for (Symbol next : sft.successors(*last)) {
      const std::uint64_t v = (codes[u] % keep) * base + sft.code(next) % base;
      auto it = std::lower_bound(codes.begin(), codes.end(), v);
      if (it != codes.end() && *it == v)
        edges.emplace_back(u, static_cast<Symbol>(it - codes.begin()));
    }
  }
  return SubshiftOfFiniteType::from_blocks(base, length, std::move(codes),
                                           std::move(edges));
}

std::optional<std::size_t> repetition_time(const Word& w, std::size_t k) {
  require(k > 0 && k < w.size(), ErrorKind::InvalidArgument,
          "repetition time needs 0 < k < length(w)");
  auto s = w.symbols();
  auto it = std::search(s.begin() + 1, s.end(), s.begin(),
                        s.begin() + static_cast<std::ptrdiff_t>(k));
  if (it == s.end()) return std::nullopt;
  return static_cast<std::size_t>(it - s.begin());
}

std::vector<std::optional<std::size_t>> repetition_times(
    std::span<const Symbol> w) {
  const std::size_t n = w.size();
  std::vector<std::optional<std::size_t>> out(n);
  if (n < 2) return out;
  std::vector<std::size_t> z(n, 0);
  std::size_t l = 0, r = 0;
  std::size_t assigned = 0;  // R_1..R_assigned known
  for (std::size_t i = 1; i < n; ++i) {
    if (i < r) z[i] = std::min(r - i, z[i - l]);
    while (i + z[i] < n && w[z[i]] == w[i + z[i]]) ++z[i];
    if (i + z[i] > r) {
      l = i;
      r = i + z[i];
    }
    while (assigned < z[i] && assigned + 1 < n) out[++assigned] = i;
  }
  return out;
}

std::optional<std::size_t> return_time_to_cylinder(const Word& w,
                                                   const Word& a) {
  require(!a.empty(), ErrorKind::InvalidArgument, "empty cylinder word");
  require(w.starts_with(a), ErrorKind::InvalidArgument,
          "word does not lie in the cylinder");
  auto s = w.symbols();
  auto c = a.symbols();
  auto it = std::search(s.begin() + 1, s.end(), c.begin(), c.end());
  if (it == s.end()) return std::nullopt;
  return static_cast<std::size_t>(it - s.begin());
}

ConnectingPaths find_connecting_paths(const SubshiftOfFiniteType& sft) {
  for (Symbol a = 0; a < sft.alphabet_size(); ++a)
    if (sft.successors(a).size() >= 2) return find_connecting_paths(sft, a);
  fail(ErrorKind::NoBranchingSymbol,
       "every symbol has a single successor; the shift is one cycle");
}

ConnectingPaths find_connecting_paths(const SubshiftOfFiniteType& sft,
                                      Symbol a) {
  require(a < sft.alphabet_size(), ErrorKind::InvalidArgument,
          "symbol outside alphabet");
  auto succ = sft.successors(a);
  if (succ.size() < 2)
    fail(ErrorKind::NoBranchingSymbol,
         "symbol " + std::to_string(a) + " has fewer than two successors");

  constexpr std::size_t kFar = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(sft.alphabet_size(), kFar);
  std::deque<Symbol> queue{a};
  dist[a] = 0;
  while (!queue.empty()) {
    Symbol v = queue.front();
    queue.pop_front();
    for (Symbol p : sft.predecessors(v)) {
      if (dist[p] == kFar) {
        dist[p] = dist[v] + 1;
        queue.push_back(p);
      }
    }
  }
  // Greedy descent along the distance field picks the lexicographically
  // smallest among the shortest paths.
  auto path_from = [&](Symbol start) {
    require(dist[start] != kFar, ErrorKind::InvalidArgument,
            "shift is not irreducible: no path back to the branch symbol");
    std::vector<Symbol> out{a, start};
    Symbol cur = start;
    while (cur != a) {
      for (Symbol next : sft.successors(cur)) {
        if (dist[next] + 1 == dist[cur]) {
          cur = next;
          break;
        }
      }
      out.push_back(cur);
    }
    if (start == a) out.pop_back();
    return Word(std::move(out), sft.alphabet_size());
  };
  return {a, path_from(succ[0]), path_from(succ[1])};
}

std::size_t ReturnAlphabet::max_return_time() const {
  std::size_t out = 0;
  for (const auto& e : entries) out = std::max(out, e.return_time);
  return out;
}

Word ReturnAlphabet::flatten(std::span<const Symbol> letters) const {
  std::vector<Symbol> out;
  for (Symbol l : letters) {
    auto s = entries.at(l).word.symbols();
    out.insert(out.end(), s.begin(), s.end());
  }
  auto b = base.symbols();
  out.insert(out.end(), b.begin(), b.end());
  return Word(std::move(out), base.alphabet_size());
}

std::optional<std::vector<Symbol>> ReturnAlphabet::parse(const Word& w) const {
  require(w.starts_with(base), ErrorKind::InvalidArgument,
          "word does not start in the base cylinder");
  std::map<std::span<const Symbol>, Symbol,
           decltype([](std::span<const Symbol> x, std::span<const Symbol> y) {
             return std::lexicographical_compare(x.begin(), x.end(),
                                                 y.begin(), y.end());
           })>
      index;
  for (Symbol i = 0; i < entries.size(); ++i)
    index.emplace(entries[i].word.symbols(), i);
  std::vector<Symbol> letters;
  auto s = w.symbols();
  std::size_t start = 0;
  for (std::size_t pos = 1; pos + base.size() <= w.size(); ++pos) {
    if (!w.occurs_at(base, pos)) continue;
    auto it = index.find(s.subspan(start, pos - start));
    if (it == index.end()) return std::nullopt;
    letters.push_back(it->second);
    start = pos;
  }
  return letters;
}

ReturnAlphabet induced_alphabet(const SubshiftOfFiniteType& sft,
                                const Word& a, std::size_t t_max) {
  require(t_max >= 2, ErrorKind::InvalidArgument, "t_max must be >= 2");
  require(!a.empty(), ErrorKind::InvalidArgument, "empty base cylinder");
  Word base(std::vector<Symbol>(a.symbols().begin(), a.symbols().end()),
            sft.alphabet_size());
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    require(sft.allows(a[i], a[i + 1]), ErrorKind::InadmissibleWord,
            "base cylinder " + a.to_string() + " is not admissible");
  }

  ReturnAlphabet out{base, {}, t_max};
  const std::size_t m = a.size();
  std::vector<Symbol> word(a.symbols().begin(), a.symbols().end());
  // Depth-first search over extensions; the frame stores the next
  // successor index to try at each appended position.
  std::vector<std::size_t> next_choice;
  auto return_found = [&]() {
    const std::size_t t = word.size() - m;
    return t >= 1 && std::equal(a.symbols().begin(), a.symbols().end(),
                                word.begin() + static_cast<std::ptrdiff_t>(t));
  };
  next_choice.push_back(0);
  while (!next_choice.empty()) {
    auto succ = sft.successors(word.back());
    std::size_t& choice = next_choice.back();
    if (choice == succ.size() || word.size() >= m + t_max - 1) {
      next_choice.pop_back();
      if (word.size() > m) word.pop_back();
      continue;
    }
    word.push_back(succ[choice++]);
    if (return_found()) {
      const std::size_t t = word.size() - m;
      out.entries.push_back(
          {Word({word.begin(), word.begin() + static_cast<std::ptrdiff_t>(t)},
                sft.alphabet_size()),
           t});
      word.pop_back();
      continue;
    }
    next_choice.push_back(0);
  }
  if (out.entries.empty())
    fail(ErrorKind::EmptyAlphabet,
         "no return to " + a.to_string() + " below " + std::to_string(t_max));
  std::sort(out.entries.begin(), out.entries.end(),
            [](const ReturnEntry& x, const ReturnEntry& y) {
              return std::tie(x.return_time, x.word) <
                     std::tie(y.return_time, y.word);
            });
  return out;
}

SubshiftOfFiniteType remove_hole(const SubshiftOfFiniteType& sft,
                                 const std::vector<Word>& holes) {
  if (holes.empty()) return sft;
  const std::size_t n = holes.front().size();
  require(n >= 1, ErrorKind::InvalidArgument, "hole words must be nonempty");
  const std::size_t base = sft.base_alphabet();
  std::unordered_set<std::uint64_t> hole_codes;
  for (const auto& h : holes) {
    require(h.size() == n, ErrorKind::InvalidArgument,
            "hole words must share a common length");
    require(n < sft.block_length() || sft.admits(h),
            ErrorKind::InadmissibleWord,
            "hole word " + h.to_string() + " is not admissible");
    hole_codes.insert(encode(h.symbols(), base));
  }

  const auto blocks = recode(sft, std::max(n, sft.block_length()));
  const std::size_t len = blocks.block_length();
  const std::uint64_t mod = checked_power(base, n);
  std::vector<bool> alive(blocks.alphabet_size(), true);
  for (Symbol s = 0; s < blocks.alphabet_size(); ++s) {
    std::uint64_t code = blocks.code(s);
    for (std::size_t j = 0; j + n <= len; ++j) {
      if (hole_codes.count(code % mod)) {
        alive[s] = false;
        break;
      }
      code /= base;
    }
  }

  // Trim states that cannot continue forward or be reached.
  std::vector<std::size_t> out_deg(blocks.alphabet_size(), 0);
  std::vector<std::size_t> in_deg(blocks.alphabet_size(), 0);
  for (Symbol s = 0; s < blocks.alphabet_size(); ++s) {
    if (!alive[s]) continue;
    for (Symbol t : blocks.successors(s)) {
      if (!alive[t]) continue;
      ++out_deg[s];
      ++in_deg[t];
    }
  }
  std::vector<Symbol> queue;
  for (Symbol s = 0; s < blocks.alphabet_size(); ++s)
    if (alive[s] && (out_deg[s] == 0 || in_deg[s] == 0)) queue.push_back(s);
  while (!queue.empty()) {
    Symbol s = queue.back();
    queue.pop_back();
    if (!alive[s]) continue;
    alive[s] = false;
    for (Symbol t : blocks.successors(s))
      if (alive[t] && --in_deg[t] == 0) queue.push_back(t);
    for (Symbol p : blocks.predecessors(s))
      if (alive[p] && --out_deg[p] == 0) queue.push_back(p);
  }

  std::vector<Symbol> remap(blocks.alphabet_size(), 0);
  std::vector<std::uint64_t> codes;
  for (Symbol s = 0; s < blocks.alphabet_size(); ++s) {
    if (!alive[s]) continue;
    remap[s] = static_cast<Symbol>(codes.size());
    codes.push_back(blocks.code(s));
  }
  if (codes.empty())
    fail(ErrorKind::EmptySurvivor, "no sequence avoids the holes");
  std::vector<SubshiftOfFiniteType::Edge> edges;
  for (Symbol s = 0; s < blocks.alphabet_size(); ++s) {
    if (!alive[s]) continue;
    for (Symbol t : blocks.successors(s))
      if (alive[t]) edges.emplace_back(remap[s], remap[t]);
  }
  return SubshiftOfFiniteType::from_blocks(base, len, std::move(codes),
                                           std::move(edges));
}

}  // namespace recur
