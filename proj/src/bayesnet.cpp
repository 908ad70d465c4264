#include "pqe/bayesnet.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "pqe/error.hpp"
#include "pqe/util.hpp"

namespace pqe {

std::vector<std::pair<int, int>> BayesNet::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int c = 0; c < size(); ++c) {
    for (int p : nodes[static_cast<std::size_t>(c)].parents) {
      out.emplace_back(p, c);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void BayesNet::validate() const {
  int n = size();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  auto in_unit = [](double p) { return p > 0.0 && p < 1.0; };

  for (int c = 0; c < n; ++c) {
    const BayesNode& node = nodes[static_cast<std::size_t>(c)];
    int prev = -1;
    for (int p : node.parents) {
      if (p < 0 || p >= n || p == c) {
        throw Error("node " + std::to_string(c) + ": bad parent id " +
                    std::to_string(p));
      }
      if (p <= prev) {
        throw Error("node " + std::to_string(c) +
                    ": parents not strictly ascending");
      }
      prev = p;
      // An edge joining two nodes already connected would create a second
      // undirected path.
      int rp = find(p), rc = find(c);
      if (rp == rc) {
        throw Error("network is not a polytree (cycle through node " +
                    std::to_string(c) + ")");
      }
      parent[static_cast<std::size_t>(rp)] = rc;
    }
    if (node.is_root()) {
      if (!node.cpt.empty()) {
        throw Error("root node " + std::to_string(c) + " carries a CPT");
      }
      if (!in_unit(node.prior)) {
        throw Error("node " + std::to_string(c) + ": prior outside (0,1)");
      }
    } else {
      std::size_t want = static_cast<std::size_t>(1) << node.parents.size();
      if (node.cpt.size() != want) {
        throw Error("node " + std::to_string(c) + ": CPT has " +
                    std::to_string(node.cpt.size()) + " rows, expected " +
                    std::to_string(want));
      }
      for (double p : node.cpt) {
        if (!in_unit(p)) {
          throw Error("node " + std::to_string(c) +
                      ": CPT value outside (0,1)");
        }
      }
    }
  }
}

std::unordered_map<std::string, int> term_index(const BayesNet& net) {
  std::unordered_map<std::string, int> idx;
  idx.reserve(static_cast<std::size_t>(net.size()));
  for (int i = 0; i < net.size(); ++i) {
    idx.emplace(net.nodes[static_cast<std::size_t>(i)].term, i);
  }
  return idx;
}

void save_network(const BayesNet& net, std::ostream& out,
                  const std::vector<std::string>& comments) {
  for (const std::string& c : comments) out << c << '\n';
  out << "PQENET 1 " << fmt_g(net.confidence) << '\n';
  for (int i = 0; i < net.size(); ++i) {
    const BayesNode& node = net.nodes[static_cast<std::size_t>(i)];
    out << "NODE " << i << ' ' << node.term;
    if (node.is_root()) {
      out << " PRIOR " << fmt_g(node.prior) << '\n';
    } else {
      out << " CPT\n";
    }
  }
  for (const auto& [p, c] : net.edges()) {
    out << "EDGE " << p << ' ' << c << '\n';
  }
  for (int i = 0; i < net.size(); ++i) {
    const BayesNode& node = net.nodes[static_cast<std::size_t>(i)];
    for (std::size_t row = 0; row < node.cpt.size(); ++row) {
      out << "CPT " << i << ' ' << row << ' ' << fmt_g(node.cpt[row]) << '\n';
    }
  }
  out << "END\n";
}

namespace {

bool net_data_line(std::istream& in, std::string* line, long* line_no) {
  while (std::getline(in, *line)) {
    ++*line_no;
    if (!line->empty() && line->back() == '\r') line->pop_back();
    std::string t = trim(*line);
    if (t.empty() || t[0] == '#') continue;
    *line = t;
    return true;
  }
  return false;
}

}  // namespace

BayesNet load_network(std::istream& in) {
  std::string line;
  long line_no = 0;
  if (!net_data_line(in, &line, &line_no)) {
    throw ParseError("empty network file");
  }
  std::vector<std::string> head = split_ws(line);
  double confidence = 0.0;
  if (head.size() != 3 || head[0] != "PQENET" || head[1] != "1" ||
      !parse_f64(head[2], &confidence)) {
    throw ParseError("not a PQENET version 1 file", line_no);
  }

  BayesNet net;
  net.confidence = confidence;
  std::vector<char> node_has_cpt;
  bool saw_end = false;

  while (net_data_line(in, &line, &line_no)) {
    std::vector<std::string> parts = split_ws(line);
    if (parts[0] == "NODE") {
      long long id = 0;
      if (parts.size() < 4 || !parse_i64(parts[1], &id) ||
          id != net.size()) {
        throw ParseError("bad NODE line", line_no);
      }
      BayesNode node;
      node.term = parts[2];
      if (parts[3] == "PRIOR") {
        double p = 0.0;
        if (parts.size() != 5 || !parse_f64(parts[4], &p)) {
          throw ParseError("bad PRIOR value", line_no);
        }
        node.prior = p;
        node_has_cpt.push_back(0);
      } else if (parts[3] == "CPT" && parts.size() == 4) {
        node_has_cpt.push_back(1);
      } else {
        throw ParseError("bad NODE line", line_no);
      }
      net.nodes.push_back(std::move(node));
    } else if (parts[0] == "EDGE") {
      long long p = 0, c = 0;
      if (parts.size() != 3 || !parse_i64(parts[1], &p) ||
          !parse_i64(parts[2], &c) || p < 0 || c < 0 || p >= net.size() ||
          c >= net.size() || p == c) {
        throw ParseError("bad EDGE line", line_no);
      }
      auto& parents = net.nodes[static_cast<std::size_t>(c)].parents;
      if (!parents.empty() && parents.back() >= static_cast<int>(p)) {
        throw ParseError("edges out of order for node " + std::to_string(c),
                         line_no);
      }
      parents.push_back(static_cast<int>(p));
    } else if (parts[0] == "CPT") {
      long long id = 0, row = 0;
      double p = 0.0;
      if (parts.size() != 4 || !parse_i64(parts[1], &id) ||
          !parse_i64(parts[2], &row) || !parse_f64(parts[3], &p) || id < 0 ||
          id >= net.size()) {
        throw ParseError("bad CPT line", line_no);
      }
      auto& node = net.nodes[static_cast<std::size_t>(id)];
      if (row != static_cast<long long>(node.cpt.size())) {
        throw ParseError("CPT rows out of order for node " +
                             std::to_string(id),
                         line_no);
      }
      node.cpt.push_back(p);
    } else if (parts[0] == "END" && parts.size() == 1) {
      saw_end = true;
      break;
    } else {
      throw ParseError("unrecognized line \"" + line + "\"", line_no);
    }
  }
  if (!saw_end) throw ParseError("truncated network file (no END)", line_no);

  for (int i = 0; i < net.size(); ++i) {
    const BayesNode& node = net.nodes[static_cast<std::size_t>(i)];
    bool wants_cpt = node_has_cpt[static_cast<std::size_t>(i)] != 0;
    if (wants_cpt == node.parents.empty()) {
      throw ParseError("node " + std::to_string(i) +
                       ": NODE declaration does not match EDGE lines");
    }
    std::size_t want =
        node.parents.empty()
            ? 0
            : static_cast<std::size_t>(1) << node.parents.size();
    if (node.cpt.size() != want) {
      throw ParseError("node " + std::to_string(i) + ": expected " +
                       std::to_string(want) + " CPT rows, found " +
                       std::to_string(node.cpt.size()));
    }
  }
  net.validate();
  return net;
}

void save_network_file(const BayesNet& net, const std::string& path,
                       const std::vector<std::string>& comments) {
  std::ostringstream out;
  save_network(net, out, comments);
  write_text_file(path, out.str());
}

BayesNet load_network_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open network file: " + path);
  try {
    return load_network(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace pqe
