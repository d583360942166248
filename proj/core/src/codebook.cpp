#include "dnafb/codebook.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dnafb/rng.hpp"

namespace dnafb {

void Codebook::validate() const {
  if (label_bits < 1) throw std::invalid_argument("codebook: label_bits must be >= 1");
  if (word_length < 1) throw std::invalid_argument("codebook: word_length must be >= 1");
  if (size() != (1 << label_bits))
    throw std::invalid_argument("codebook: expected exactly 2^k entries");
  std::set<DnaSequence> seen;
  for (const DnaSequence& w : words) {
    if (static_cast<int>(w.size()) != word_length)
      throw std::invalid_argument("codebook: word with wrong length");
    for (Symbol s : w)
      if (s >= q) throw std::invalid_argument("codebook: symbol out of range");
    if (!seen.insert(w).second)
      throw std::invalid_argument("codebook: duplicate codeword");
  }
}

int levenshtein(const DnaSequence& a, const DnaSequence& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<int> row(m + 1);
  for (std::size_t j = 0; j <= m; ++j) row[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    int diag = row[0];
    row[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const int subst = diag + (a[i - 1] != b[j - 1]);
      diag = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, subst});
    }
  }
  return row[m];
}

int codebook_min_levenshtein(const Codebook& cb) {
  if (cb.size() < 2) throw std::invalid_argument("codebook: need >= 2 entries for a distance");
  int best = levenshtein(cb.words[0], cb.words[1]);
  for (std::size_t i = 0; i < cb.words.size(); ++i)
    for (std::size_t j = i + 1; j < cb.words.size(); ++j)
      best = std::min(best, levenshtein(cb.words[i], cb.words[j]));
  return best;
}

std::vector<Codebook> parse_codebook_file(std::istream& in) {
  std::vector<Codebook> books;
  std::string line;
  int lineno = 0;
  Codebook cur;
  int expected = 0;
  auto flush = [&] {
    if (expected == 0) return;
    if (cur.size() != expected)
      throw std::runtime_error("codebook file: missing entries for codebook " + std::to_string(cur.id));
    cur.validate();
    books.push_back(cur);
    cur = Codebook{};
    expected = 0;
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "codebook") {
      flush();
      std::string na, ka;
      if (!(ls >> cur.id >> na >> ka) || na.rfind("n=", 0) != 0 || ka.rfind("k=", 0) != 0)
        throw std::runtime_error("codebook file: bad header at line " + std::to_string(lineno));
      cur.word_length = std::stoi(na.substr(2));
      cur.label_bits = std::stoi(ka.substr(2));
      expected = 1 << cur.label_bits;
      cur.words.assign(static_cast<std::size_t>(expected), DnaSequence{});
    } else {
      if (expected == 0)
        throw std::runtime_error("codebook file: entry before header at line " + std::to_string(lineno));
      std::string word;
      if (!(ls >> word))
        throw std::runtime_error("codebook file: missing word at line " + std::to_string(lineno));
      const int label = std::stoi(first);
      if (label < 0 || label >= expected)
        throw std::runtime_error("codebook file: label out of range at line " + std::to_string(lineno));
      cur.words[static_cast<std::size_t>(label)] = from_acgt(word);
    }
  }
  flush();
  if (books.empty()) throw std::runtime_error("codebook file: no codebooks found");
  return books;
}

std::vector<Codebook> load_codebook_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open codebook file: " + path);
  return parse_codebook_file(in);
}

void write_codebook_file(std::ostream& out, const std::vector<Codebook>& books) {
  for (const Codebook& cb : books) {
    out << "codebook " << cb.id << " n=" << cb.word_length << " k=" << cb.label_bits << "\n";
    for (int label = 0; label < cb.size(); ++label)
      out << label << " " << to_acgt(cb.words[static_cast<std::size_t>(label)]) << "\n";
  }
}

namespace {

// Length-8 bit strings; LSB-first bit pairs b0 + 2*b1 give the quaternary word.
DnaSequence word_from_bits(int v) {
  DnaSequence w(4);
  for (int j = 0; j < 4; ++j)
    w[static_cast<std::size_t>(j)] = static_cast<Symbol>(((v >> (2 * j)) & 1) | (((v >> (2 * j + 1)) & 1) << 1));
  return w;
}

Codebook book_from_bits(int id, const int (&values)[16]) {
  Codebook cb;
  cb.id = id;
  cb.word_length = 4;
  cb.label_bits = 4;
  for (int v : values) cb.words.push_back(word_from_bits(v));
  cb.validate();
  return cb;
}

}  // namespace

std::vector<Codebook> builtin_tvc_codebooks() {
  static const int kBooks[4][16] = {
      {0, 160, 236, 17, 85, 245, 185, 98, 38, 170, 250, 115, 55, 11, 175, 255},
      {64, 240, 152, 33, 165, 117, 205, 130, 202, 90, 222, 19, 171, 59, 95, 191},
      {48, 84, 184, 220, 65, 137, 237, 10, 218, 170, 206, 131, 155, 95, 47, 255},
      {192, 160, 188, 81, 5, 245, 185, 102, 10, 234, 206, 67, 55, 139, 123, 255}};
  std::vector<Codebook> books;
  for (int i = 0; i < 4; ++i) books.push_back(book_from_bits(i + 1, kBooks[i]));
  return books;
}

Codebook builtin_wm_codebook() {
  int values[16];
  int count = 0;
  for (int weight = 0; count < 16; ++weight)
    for (int v = 0; v < 256 && count < 16; ++v)
      if (std::popcount(static_cast<unsigned>(v)) == weight) values[count++] = v;
  return book_from_bits(1, values);
}

std::vector<Codebook> greedy_codebooks(int count, int word_length, int label_bits,
                                       int q, int min_distance, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("greedy_codebooks: count must be >= 1");
  const int target = 1 << label_bits;
  std::int64_t universe = 1;
  for (int i = 0; i < word_length; ++i) {
    universe *= q;
    if (universe > (1 << 24)) throw std::invalid_argument("greedy_codebooks: word space too large");
  }
  std::vector<Codebook> books;
  for (int b = 0; b < count; ++b) {
    Rng rng(sub_seed(seed, static_cast<std::uint64_t>(b)));
    std::vector<std::int64_t> order(static_cast<std::size_t>(universe));
    for (std::int64_t i = 0; i < universe; ++i) order[static_cast<std::size_t>(i)] = i;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      const std::size_t j = i + rng.uniform_int(static_cast<std::uint32_t>(order.size() - i));
      std::swap(order[i], order[j]);
    }
    Codebook cb;
    cb.id = b + 1;
    cb.word_length = word_length;
    cb.label_bits = label_bits;
    cb.q = q;
    for (std::int64_t v : order) {
      DnaSequence w(static_cast<std::size_t>(word_length));
      std::int64_t rest = v;
      for (int i = word_length - 1; i >= 0; --i) {
        w[static_cast<std::size_t>(i)] = static_cast<Symbol>(rest % q);
        rest /= q;
      }
      bool ok = true;
      for (const DnaSequence& u : cb.words)
        if (levenshtein(u, w) < min_distance) { ok = false; break; }
      if (ok) {
        cb.words.push_back(std::move(w));
        if (cb.size() == target) break;
      }
    }
    if (cb.size() != target)
      throw std::runtime_error("greedy_codebooks: could not reach 2^k words at the requested distance");
    cb.validate();
    books.push_back(std::move(cb));
  }
  return books;
}

}  // namespace dnafb
