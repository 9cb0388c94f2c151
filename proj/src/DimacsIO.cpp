#include "DimacsIO.h"

#include <charconv>
#include <fstream>
#include <sstream>

namespace cherry {

namespace {

[[noreturn]] void Fail(int line_no, const std::string &msg) {
    throw InputError("line " + std::to_string(line_no) + ": " + msg);
}

bool ParseInt(const std::string &tok, int64_t &out) {
    if (tok.empty()) {
        return false;
    }
    auto ret = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ret.ec == std::errc() && ret.ptr == tok.data() + tok.size();
}

std::vector<std::string> Tokens(const std::string &line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
        out.push_back(tok);
    }
    return out;
}

}  // namespace

Instance ReadDimacs(std::istream &in) {
    Instance inst;
    bool have_header = false;
    int64_t expected_m = 0;
    int line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == 'c') {
            continue;
        }
        auto toks = Tokens(line);
        if (toks.empty()) {
            continue;
        }
        if (toks[0] == "p") {
            if (have_header) {
                Fail(line_no, "duplicate problem line");
            }
            if (toks.size() != 4 || toks[1] != "edge") {
                Fail(line_no, "expected 'p edge <n> <m>'");
            }
            int64_t n = 0;
            if (!ParseInt(toks[2], n) || n < 1 || n > (int64_t(1) << 30)) {
                Fail(line_no, "bad node count");
            }
            if (!ParseInt(toks[3], expected_m) || expected_m < 0) {
                Fail(line_no, "bad edge count");
            }
            inst.n = static_cast<int32_t>(n);
            inst.edges.reserve(static_cast<size_t>(expected_m));
            have_header = true;
        } else if (toks[0] == "e") {
            if (!have_header) {
                Fail(line_no, "edge before problem line");
            }
            if (toks.size() != 4) {
                Fail(line_no, "expected 'e <u> <v> <w>'");
            }
            int64_t u = 0;
            int64_t v = 0;
            int64_t w = 0;
            if (!ParseInt(toks[1], u) || !ParseInt(toks[2], v) || !ParseInt(toks[3], w)) {
                Fail(line_no, "bad edge tokens");
            }
            if (u < 1 || u > inst.n || v < 1 || v > inst.n) {
                Fail(line_no, "endpoint out of range");
            }
            if (u == v) {
                Fail(line_no, "self-loop");
            }
            if (w > kMaxInputWeight || w < -kMaxInputWeight) {
                Fail(line_no, "weight magnitude exceeds 2^40");
            }
            inst.edges.push_back({static_cast<int32_t>(u - 1), static_cast<int32_t>(v - 1), w});
        } else {
            Fail(line_no, "unknown line type '" + toks[0] + "'");
        }
    }
    if (!have_header) {
        throw InputError("missing problem line");
    }
    if (static_cast<int64_t>(inst.edges.size()) != expected_m) {
        throw InputError("edge count mismatch: header says " + std::to_string(expected_m) +
                         ", found " + std::to_string(inst.edges.size()));
    }
    return inst;
}

Instance ReadDimacsFile(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    return ReadDimacs(in);
}

void WriteDimacs(const Instance &inst, std::ostream &out) {
    out << "p edge " << inst.n << ' ' << inst.edges.size() << '\n';
    for (const auto &e : inst.edges) {
        out << "e " << e.u + 1 << ' ' << e.v + 1 << ' ' << e.w << '\n';
    }
}

void WriteDimacsFile(const Instance &inst, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot open " + path + " for writing");
    }
    WriteDimacs(inst, out);
}

SolutionFile ReadSolution(std::istream &in, int32_t n) {
    SolutionFile sol;
    bool have_status = false;
    int line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == 'c') {
            continue;
        }
        auto toks = Tokens(line);
        if (toks.empty()) {
            continue;
        }
        if (toks[0] == "s") {
            if (have_status || toks.size() != 2) {
                Fail(line_no, "bad status line");
            }
            if (toks[1] == "INFEASIBLE") {
                sol.infeasible = true;
            } else {
                int64_t w = 0;
                if (!ParseInt(toks[1], w)) {
                    Fail(line_no, "bad total weight");
                }
                sol.total_weight = w;
            }
            have_status = true;
        } else if (toks[0] == "m") {
            if (toks.size() != 3) {
                Fail(line_no, "expected 'm <u> <v>'");
            }
            int64_t u = 0;
            int64_t v = 0;
            if (!ParseInt(toks[1], u) || !ParseInt(toks[2], v) || u < 1 || u > n || v < 1 ||
                v > n || u == v) {
                Fail(line_no, "bad matched pair");
            }
            sol.matching.emplace_back(static_cast<int32_t>(u - 1), static_cast<int32_t>(v - 1));
        } else if (toks[0] == "scale") {
            int64_t k = 0;
            if (toks.size() != 2 || !ParseInt(toks[1], k) || (k != 1 && k != 4)) {
                Fail(line_no, "bad scale line");
            }
            sol.dual_scale = static_cast<int32_t>(k);
        } else if (toks[0] == "y") {
            int64_t v = 0;
            int64_t val = 0;
            if (toks.size() != 3 || !ParseInt(toks[1], v) || !ParseInt(toks[2], val) || v < 1 ||
                v > n) {
                Fail(line_no, "bad node dual line");
            }
            if (!sol.has_duals) {
                sol.has_duals = true;
                sol.node_duals.assign(n, 0);
            }
            sol.node_duals[v - 1] = val;
        } else if (toks[0] == "Y") {
            if (toks.size() < 3) {
                Fail(line_no, "bad blossom dual line");
            }
            int64_t k = 0;
            if (!ParseInt(toks[1], k) || k < 3 || toks.size() != static_cast<size_t>(k) + 3) {
                Fail(line_no, "bad blossom member count");
            }
            SolutionFile::BlossomDual bd;
            for (int64_t i = 0; i < k; ++i) {
                int64_t v = 0;
                if (!ParseInt(toks[2 + i], v) || v < 1 || v > n) {
                    Fail(line_no, "bad blossom member");
                }
                bd.members.push_back(static_cast<int32_t>(v - 1));
            }
            int64_t val = 0;
            if (!ParseInt(toks.back(), val)) {
                Fail(line_no, "bad blossom dual value");
            }
            bd.value = val;
            sol.blossom_duals.push_back(std::move(bd));
        } else {
            Fail(line_no, "unknown line type '" + toks[0] + "'");
        }
    }
    if (!have_status) {
        throw InputError("missing status line");
    }
    return sol;
}

SolutionFile ReadSolutionFile(const std::string &path, int32_t n) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    return ReadSolution(in, n);
}

void WriteSolution(const SolutionFile &sol, std::ostream &out) {
    if (sol.infeasible) {
        out << "s INFEASIBLE\n";
        return;
    }
    out << "s " << sol.total_weight << '\n';
    for (const auto &[u, v] : sol.matching) {
        out << "m " << u + 1 << ' ' << v + 1 << '\n';
    }
    if (sol.has_duals) {
        out << "scale " << sol.dual_scale << '\n';
        for (size_t v = 0; v < sol.node_duals.size(); ++v) {
            out << "y " << v + 1 << ' ' << sol.node_duals[v] << '\n';
        }
        for (const auto &bd : sol.blossom_duals) {
            out << "Y " << bd.members.size();
            for (int32_t v : bd.members) {
                out << ' ' << v + 1;
            }
            out << ' ' << bd.value << '\n';
        }
    }
}

void WriteSolutionFile(const SolutionFile &sol, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot open " + path + " for writing");
    }
    WriteSolution(sol, out);
}

}  // namespace cherry
