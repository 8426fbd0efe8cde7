#include "bianchi/presentations.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace bianchi {

namespace {

using nlohmann::json;

QuadInt quadint_from(const json& v, int d) {
    BIANCHI_CHECK(v.is_array() && v.size() == 2, "matrix entry must be a pair [a, b]");
    auto coord = [](const json& c) {
        if (c.is_string()) return mpz_class(c.get<std::string>());
        BIANCHI_CHECK(c.is_number_integer(), "matrix coordinate must be an integer or a decimal string");
        return mpz_class(c.get<long>());
    };
    return QuadInt(coord(v[0]), coord(v[1]), d);
}

Mat2 mat2_from(const json& v, int d) {
    BIANCHI_CHECK(v.is_array() && v.size() == 2 && v[0].is_array() && v[0].size() == 2 &&
                      v[1].is_array() && v[1].size() == 2,
                  "matrix must be a 2x2 array of [a, b] pairs");
    return Mat2(quadint_from(v[0][0], d), quadint_from(v[0][1], d), quadint_from(v[1][0], d),
                quadint_from(v[1][1], d));
}

Mat2 scale_matrix(const QuadInt& u, const Mat2& m) {
    return Mat2(u * m.m00, u * m.m01, u * m.m10, u * m.m11);
}

std::vector<QuadInt> scalar_units(int d, GroupKind kind) {
    if (kind == GroupKind::PGL) return units(d);
    return {QuadInt(1, 0, d), QuadInt(-1, 0, d)};
}

std::vector<mpz_class> matrix_key(const Mat2& m) {
    return {m.m00.a, m.m00.b, m.m01.a, m.m01.b, m.m10.a, m.m10.b, m.m11.a, m.m11.b};
}

// True if val is a unit scalar matrix (PGL) or plus/minus the identity (PSL).
bool is_scalar_relator_value(const Mat2& val, GroupKind kind) {
    if (!(val.m01 == QuadInt(0, 0, val.ring_d())) || !(val.m10 == QuadInt(0, 0, val.ring_d())))
        return false;
    if (!(val.m00 == val.m11)) return false;
    for (const QuadInt& u : scalar_units(val.ring_d(), kind))
        if (val.m00 == u) return true;
    return false;
}

std::optional<QuadInt> unit_square_root(const QuadInt& x) {
    for (const QuadInt& u : units(x.d))
        if (u * u == x) return u;
    return std::nullopt;
}

// Coset enumeration over the trivial subgroup, used to certify that the
// relator sets of the finite vertex stabilizers really present groups of the
// declared (small) orders.  Letters 2k and 2k+1 stand for generator k and
// its inverse.  Coincidences are processed with a union-find; all table
// reads go through rep() so stale entries resolve lazily.
class CosetEnumerator {
public:
    CosetEnumerator(int ngens, const std::vector<Word>& relators, long cap)
        : nletters_(2 * ngens), cap_(cap) {
        for (const Word& w : relators) {
            if (w.empty()) continue;
            std::vector<int> letters;
            letters.reserve(w.size());
            for (int letter : w) {
                BIANCHI_CHECK(letter != 0 && std::abs(letter) <= ngens,
                              "relator letter out of range");
                letters.push_back(letter > 0 ? 2 * (letter - 1) : 2 * (-letter - 1) + 1);
            }
            relators_.push_back(std::move(letters));
        }
        new_coset();
    }

    long run() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (long c = 0; c < static_cast<long>(tab_.size()); ++c) {
                if (!live(c)) continue;
                for (const auto& rel : relators_) {
                    if (scan_and_fill(c, rel)) changed = true;
                    if (!live(c)) break;
                }
            }
            for (long c = 0; c < static_cast<long>(tab_.size()); ++c) {
                if (!live(c)) continue;
                for (int l = 0; l < nletters_; ++l) {
                    if (tab_[c][l] < 0) {
                        define(c, l);
                        changed = true;
                    }
                }
            }
        }
        long count = 0;
        for (long c = 0; c < static_cast<long>(tab_.size()); ++c)
            if (live(c)) ++count;
        return count;
    }

private:
    static int inv(int l) { return l ^ 1; }
    bool live(long c) { return parent_[c] == c; }

    long rep(long c) {
        while (parent_[c] != c) {
            parent_[c] = parent_[parent_[c]];
            c = parent_[c];
        }
        return c;
    }

    long new_coset() {
        BIANCHI_CHECK(static_cast<long>(tab_.size()) < cap_,
                      "coset enumeration exceeded its table cap; presentation does not "
                      "define a group of the expected finite order");
        tab_.emplace_back(nletters_, -1L);
        parent_.push_back(static_cast<long>(tab_.size()) - 1);
        return parent_.back();
    }

    long define(long c, int l) {
        long n = new_coset();
        tab_[c][l] = n;
        tab_[n][inv(l)] = c;
        return n;
    }

    // Record tab[x][l] = y together with the mirror entry, merging cosets
    // whenever a slot already holds a different value.
    void set_entry(long x, int l, long y) {
        x = rep(x);
        y = rep(y);
        for (;;) {
            long old = tab_[x][l] < 0 ? -1 : rep(tab_[x][l]);
            if (old == y) break;
            if (old >= 0) {
                coincide(old, y);
                x = rep(x);
                y = rep(y);
                continue;
            }
            tab_[x][l] = y;
            long mirror = tab_[y][inv(l)] < 0 ? -1 : rep(tab_[y][inv(l)]);
            if (mirror < 0)
                tab_[y][inv(l)] = x;
            else if (mirror != x)
                coincide(mirror, x);
            break;
        }
    }

    bool scan_and_fill(long c, const std::vector<int>& rel) {
        bool did = false;
        long f = rep(c);
        long b = f;
        size_t i = 0;
        size_t j = rel.size();
        for (;;) {
            while (i < j && tab_[f][rel[i]] >= 0) {
                f = rep(tab_[f][rel[i]]);
                ++i;
            }
            if (i == j) {
                if (f != b) {
                    coincide(f, b);
                    did = true;
                }
                return did;
            }
            while (j > i && tab_[b][inv(rel[j - 1])] >= 0) {
                --j;
                b = rep(tab_[b][inv(rel[j])]);
            }
            if (j == i) {
                if (f != b) {
                    coincide(f, b);
                    did = true;
                }
                return did;
            }
            if (j == i + 1) {
                set_entry(f, rel[i], b);
                return true;
            }
            define(f, rel[i]);
            did = true;
        }
    }

    void coincide(long a, long b) {
        std::deque<std::pair<long, long>> queue{{a, b}};
        while (!queue.empty()) {
            long x = rep(queue.front().first);
            long y = rep(queue.front().second);
            queue.pop_front();
            if (x == y) continue;
            if (x > y) std::swap(x, y);
            parent_[y] = x;
            for (int l = 0; l < nletters_; ++l) {
                if (tab_[y][l] < 0) continue;
                long target = rep(tab_[y][l]);
                long existing = tab_[x][l] < 0 ? -1 : rep(tab_[x][l]);
                if (existing < 0) {
                    tab_[x][l] = target;
                    long mirror = tab_[target][inv(l)] < 0 ? -1 : rep(tab_[target][inv(l)]);
                    if (mirror < 0)
                        tab_[target][inv(l)] = x;
                    else if (mirror != x)
                        queue.emplace_back(mirror, x);
                } else if (existing != target) {
                    queue.emplace_back(existing, target);
                }
            }
        }
    }

    int nletters_;
    long cap_;
    std::vector<std::vector<int>> relators_;
    std::vector<std::vector<long>> tab_;
    std::vector<long> parent_;
};

}  // namespace

Word inverse_word(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
    return out;
}

Word concat_words(const Word& u, const Word& v) {
    Word out = u;
    out.insert(out.end(), v.begin(), v.end());
    return out;
}

Word word_from_string(const std::string& text, const std::vector<std::string>& gen_names) {
    Word out;
    for (char ch : text) {
        if (ch == ' ') continue;
        const bool upper = (ch >= 'A' && ch <= 'Z');
        std::string name(1, upper ? static_cast<char>(ch - 'A' + 'a') : ch);
        auto it = std::find(gen_names.begin(), gen_names.end(), name);
        BIANCHI_CHECK(it != gen_names.end(), "unknown generator letter in word: " + text);
        int idx = static_cast<int>(it - gen_names.begin()) + 1;
        out.push_back(upper ? -idx : idx);
    }
    return out;
}

std::string word_to_string(const Word& w, const std::vector<std::string>& gen_names) {
    std::string out;
    for (int letter : w) {
        int idx = std::abs(letter) - 1;
        BIANCHI_CHECK(idx >= 0 && idx < static_cast<int>(gen_names.size()),
                      "word letter out of range");
        std::string name = gen_names[idx];
        if (letter < 0 && name.size() == 1 && name[0] >= 'a' && name[0] <= 'z')
            out += static_cast<char>(name[0] - 'a' + 'A');
        else if (letter < 0)
            out += name + "^-1 ";
        else
            out += name;
    }
    return out;
}

namespace {

Mat2 evaluate_word(const std::vector<Mat2>& gens, int d, const Word& w) {
    Mat2 result = Mat2::identity(d);
    for (int letter : w) {
        int idx = std::abs(letter) - 1;
        BIANCHI_CHECK(idx >= 0 && idx < static_cast<int>(gens.size()), "word letter out of range");
        result = letter > 0 ? result * gens[idx] : result * mat2_inverse(gens[idx]);
    }
    return result;
}

}  // namespace

Mat2 GroupPresentation::evaluate(const Word& w) const { return evaluate_word(gens, d, w); }
Mat2 CellComplex::evaluate(const Word& w) const { return evaluate_word(gens, d, w); }

void GroupPresentation::validate() const {
    BIANCHI_CHECK(gens.size() == gen_names.size(), "generator names out of sync");
    for (const Mat2& m : gens) {
        BIANCHI_CHECK(is_unit(m.det()), "presentation generator must have unit determinant");
        if (kind == GroupKind::PSL)
            BIANCHI_CHECK(m.det() == QuadInt(1, 0, d), "PSL generator must have determinant 1");
    }
    for (const Word& r : relators) {
        Mat2 val = evaluate(r);
        BIANCHI_CHECK(is_scalar_relator_value(val, kind),
                      "relator does not evaluate to a scalar: " + word_to_string(r, gen_names) +
                          " in " + name);
    }
}

Mat2 scalar_canonical(const Mat2& m, GroupKind kind) {
    Mat2 best = m;
    std::vector<mpz_class> best_key = matrix_key(m);
    for (const QuadInt& u : scalar_units(m.ring_d(), kind)) {
        Mat2 cand = scale_matrix(u, m);
        std::vector<mpz_class> key = matrix_key(cand);
        if (key < best_key) {
            best_key = std::move(key);
            best = cand;
        }
    }
    return best;
}

int MatrixGroup::find(const Mat2& m) const {
    auto it = index.find(matrix_key(scalar_canonical(m, kind)));
    return it == index.end() ? -1 : it->second;
}

MatrixGroup enumerate_matrix_group(const std::vector<Mat2>& all_gens,
                                   const std::vector<int>& gen_indices, GroupKind kind,
                                   long cap) {
    BIANCHI_CHECK(!all_gens.empty(), "cannot enumerate a group without generators");
    const int d = all_gens.front().ring_d();
    MatrixGroup group;
    group.kind = kind;
    group.gen_indices = gen_indices;

    std::vector<Mat2> step;
    std::vector<int> step_letter;
    for (size_t pos = 0; pos < gen_indices.size(); ++pos) {
        const Mat2& g = all_gens.at(gen_indices[pos]);
        BIANCHI_CHECK(is_unit(g.det()), "group generator must have unit determinant");
        step.push_back(g);
        step_letter.push_back(static_cast<int>(pos) + 1);
        step.push_back(mat2_inverse(g));
        step_letter.push_back(-(static_cast<int>(pos) + 1));
    }

    auto push = [&](const Mat2& m, const Word& w) {
        Mat2 canon = scalar_canonical(m, kind);
        auto key = matrix_key(canon);
        if (group.index.count(key)) return false;
        group.index.emplace(std::move(key), static_cast<int>(group.elements.size()));
        group.elements.push_back(canon);
        group.words.push_back(w);
        return true;
    };

    push(Mat2::identity(d), Word{});
    for (size_t head = 0; head < group.elements.size(); ++head) {
        BIANCHI_CHECK(static_cast<long>(group.elements.size()) <= cap,
                      "matrix group closure exceeded its cap; stabilizer is not finite");
        Mat2 current = group.elements[head];
        Word word = group.words[head];
        for (size_t s = 0; s < step.size(); ++s) {
            Word next_word = word;
            next_word.push_back(step_letter[s]);
            push(current * step[s], next_word);
        }
    }
    return group;
}

Word find_word_in_group(const MatrixGroup& group, const Mat2& m) {
    int pos = group.find(m);
    BIANCHI_CHECK(pos >= 0, "matrix is not in the enumerated group");
    Word local = group.words[pos];
    Word global;
    global.reserve(local.size());
    for (int letter : local) {
        int idx = group.gen_indices.at(std::abs(letter) - 1) + 1;
        global.push_back(letter > 0 ? idx : -idx);
    }
    return global;
}

long coset_enumeration_order(int ngens, const std::vector<Word>& relators, long cap) {
    return CosetEnumerator(ngens, relators, cap).run();
}

namespace {

// Relators of a vertex group rewritten over its own generator list, for the
// presented-order check.
std::vector<Word> local_relators(const VertexCell& v) {
    std::vector<Word> out;
    for (const Word& r : v.relators) {
        Word local;
        for (int letter : r) {
            int idx = std::abs(letter) - 1;
            auto it = std::find(v.stab_gens.begin(), v.stab_gens.end(), idx);
            BIANCHI_CHECK(it != v.stab_gens.end(),
                          "vertex relator uses a generator outside the stabilizer");
            int pos = static_cast<int>(it - v.stab_gens.begin()) + 1;
            local.push_back(letter > 0 ? pos : -pos);
        }
        out.push_back(std::move(local));
    }
    return out;
}

}  // namespace

void validate_cellcomplex(const CellComplex& cx) {
    BIANCHI_CHECK(valid_d(cx.d), "unsupported ring");
    BIANCHI_CHECK(cx.gens.size() == cx.gen_names.size(), "generator names out of sync");
    const QuadInt one(1, 0, cx.d);
    for (const Mat2& m : cx.gens) {
        BIANCHI_CHECK(is_unit(m.det()), "complex generator must have unit determinant");
        if (cx.kind == GroupKind::PSL)
            BIANCHI_CHECK(m.det() == one, "PSL complex generator must have determinant 1");
    }

    std::vector<MatrixGroup> vertex_groups;
    for (const VertexCell& v : cx.vertices) {
        for (const Word& r : v.relators) {
            BIANCHI_CHECK(is_scalar_relator_value(cx.evaluate(r), cx.kind),
                          "vertex relator does not evaluate to a scalar in " + v.name);
        }
        MatrixGroup group = enumerate_matrix_group(cx.gens, v.stab_gens, cx.kind, 4 * v.order);
        BIANCHI_CHECK(group.order() == v.order,
                      "vertex stabilizer closure order mismatch at " + v.name);
        long presented =
            coset_enumeration_order(static_cast<int>(v.stab_gens.size()), local_relators(v),
                                    200 * v.order + 2000);
        BIANCHI_CHECK(presented == v.order, "vertex presented order mismatch at " + v.name);
        vertex_groups.push_back(std::move(group));
    }

    for (const EdgeCell& e : cx.edges) {
        MatrixGroup group = enumerate_matrix_group(cx.gens, e.stab_gens, cx.kind, 4 * e.order);
        BIANCHI_CHECK(group.order() == e.order, "edge stabilizer order mismatch at " + e.name);
        for (const EdgeEnd* end : {&e.from, &e.to}) {
            BIANCHI_CHECK(end->vertex >= 0 &&
                              end->vertex < static_cast<int>(cx.vertices.size()),
                          "edge endpoint out of range at " + e.name);
            Mat2 tau = cx.evaluate(end->transport);
            Mat2 tau_inv = mat2_inverse(tau);
            for (int gi : e.stab_gens) {
                Mat2 conj = tau_inv * cx.gens[gi] * tau;
                BIANCHI_CHECK(vertex_groups[end->vertex].find(conj) >= 0,
                              "transported edge stabilizer escapes the vertex group at " +
                                  e.name);
            }
        }
    }

    BIANCHI_CHECK(!cx.face.empty(), "complex must have a 2-cell boundary");
    for (const FaceSide& s : cx.face) {
        BIANCHI_CHECK(s.edge >= 0 && s.edge < static_cast<int>(cx.edges.size()),
                      "face side references a missing edge");
        BIANCHI_CHECK(s.sign == 1 || s.sign == -1, "face side sign must be +1 or -1");
    }

    // Trivial-coefficient differentials compose to zero: every module action
    // is the identity, so d0 sends a vertex tuple m to (m at head - m at
    // tail) per edge and d1 sums the signed side contributions.  This pins
    // the orientation bookkeeping of the data file.
    {
        std::vector<mpz_class> composed(cx.vertices.size(), 0);
        for (size_t vi = 0; vi < cx.vertices.size(); ++vi) {
            mpz_class total = 0;
            for (const FaceSide& s : cx.face) {
                const EdgeCell& e = cx.edges[s.edge];
                int coeff = 0;
                if (e.to.vertex == static_cast<int>(vi)) coeff += 1;
                if (e.from.vertex == static_cast<int>(vi)) coeff -= 1;
                total += s.sign * coeff;
            }
            BIANCHI_CHECK(total == 0,
                          "trivial-coefficient differentials do not compose to zero");
        }
    }
}

GroupPresentation presentation_from_complex(const CellComplex& cx) {
    GroupPresentation p;
    p.d = cx.d;
    p.kind = cx.kind;
    p.name = cx.name + "_presentation";
    p.gen_names = cx.gen_names;
    p.gens = cx.gens;

    std::set<Word> seen;
    auto add_relator = [&](const Word& w) {
        if (!w.empty() && seen.insert(w).second) p.relators.push_back(w);
    };

    for (const VertexCell& v : cx.vertices)
        for (const Word& r : v.relators) add_relator(r);

    for (const EdgeCell& e : cx.edges) {
        for (const EdgeEnd* end : {&e.from, &e.to}) {
            if (end->transport.empty()) continue;
            const VertexCell& v = cx.vertices.at(end->vertex);
            MatrixGroup group = enumerate_matrix_group(cx.gens, v.stab_gens, cx.kind, 4 * v.order);
            Mat2 tau = cx.evaluate(end->transport);
            Mat2 tau_inv = mat2_inverse(tau);
            for (int gi : e.stab_gens) {
                Word conj_word = find_word_in_group(group, tau_inv * cx.gens[gi] * tau);
                Word rel = concat_words(inverse_word(end->transport), Word{gi + 1});
                rel = concat_words(rel, end->transport);
                rel = concat_words(rel, inverse_word(conj_word));
                add_relator(rel);
            }
        }
    }

    p.validate();
    return p;
}

GroupPresentation reidemeister_schreier_even_det(const GroupPresentation& pgl) {
    BIANCHI_CHECK(pgl.kind == GroupKind::PGL,
                  "determinant parity subgroup is cut out of a PGL presentation");
    const int d = pgl.d;
    const int ngens = pgl.ngens();

    std::vector<int> parity(ngens);
    for (int g = 0; g < ngens; ++g)
        parity[g] = unit_square_root(pgl.gens[g].det()) ? 0 : 1;

    int t = -1;
    for (int g = 0; g < ngens && t < 0; ++g)
        if (parity[g] == 1) t = g;
    BIANCHI_CHECK(t >= 0, "determinant parity map is trivial; PSL equals PGL here");

    // Schreier generators (coset, generator), skipping the tree edge (0, t).
    std::map<std::pair<int, int>, int> schreier_index;
    GroupPresentation psl;
    psl.d = d;
    psl.kind = GroupKind::PSL;
    psl.name = pgl.name + "_even_det";

    const Mat2 transversal[2] = {Mat2::identity(d), pgl.gens[t]};
    for (int c = 0; c < 2; ++c) {
        for (int g = 0; g < ngens; ++g) {
            if (c == 0 && g == t) continue;
            int target = c ^ parity[g];
            Mat2 m = transversal[c] * pgl.gens[g] * mat2_inverse(transversal[target]);
            std::optional<QuadInt> root = unit_square_root(m.det());
            BIANCHI_CHECK(root.has_value(), "Schreier generator has odd determinant class");
            // Rescale by the inverse unit so the determinant becomes exactly 1.
            m = scale_matrix(conj(*root), m);
            BIANCHI_CHECK(m.det() == QuadInt(1, 0, d), "Schreier generator rescale failed");
            schreier_index[{c, g}] = psl.ngens();
            psl.gen_names.push_back(pgl.gen_names[g] + (c == 0 ? "0" : "1"));
            psl.gens.push_back(m);
        }
    }

    for (const Word& rel : pgl.relators) {
        for (int c = 0; c < 2; ++c) {
            Word rewritten;
            int at = c;
            for (int letter : rel) {
                int g = std::abs(letter) - 1;
                if (letter > 0) {
                    auto it = schreier_index.find({at, g});
                    if (it != schreier_index.end()) rewritten.push_back(it->second + 1);
                    at ^= parity[g];
                } else {
                    int source = at ^ parity[g];
                    auto it = schreier_index.find({source, g});
                    if (it != schreier_index.end()) rewritten.push_back(-(it->second + 1));
                    at = source;
                }
            }
            BIANCHI_CHECK(at == c, "relator walk must return to its starting coset");
            if (!rewritten.empty()) psl.relators.push_back(std::move(rewritten));
        }
    }

    psl.validate();
    return psl;
}

namespace {

Word json_word(const json& v, const std::vector<std::string>& gen_names) {
    BIANCHI_CHECK(v.is_string(), "word must be a string over the generator letters");
    return word_from_string(v.get<std::string>(), gen_names);
}

int vertex_index(const CellComplex& cx, const std::string& name) {
    for (size_t i = 0; i < cx.vertices.size(); ++i)
        if (cx.vertices[i].name == name) return static_cast<int>(i);
    BIANCHI_CHECK(false, "unknown vertex name: " + name);
    return -1;
}

int edge_index(const CellComplex& cx, const std::string& name) {
    for (size_t i = 0; i < cx.edges.size(); ++i)
        if (cx.edges[i].name == name) return static_cast<int>(i);
    BIANCHI_CHECK(false, "unknown edge name: " + name);
    return -1;
}

std::vector<int> gen_list(const json& v, const std::vector<std::string>& gen_names) {
    std::vector<int> out;
    BIANCHI_CHECK(v.is_array(), "stabilizer must be an array of generator names");
    for (const json& item : v) {
        const std::string name = item.get<std::string>();
        auto it = std::find(gen_names.begin(), gen_names.end(), name);
        BIANCHI_CHECK(it != gen_names.end(), "unknown generator name: " + name);
        out.push_back(static_cast<int>(it - gen_names.begin()));
    }
    return out;
}

GroupKind group_kind_from(const json& v) {
    const std::string s = v.get<std::string>();
    if (s == "PSL") return GroupKind::PSL;
    BIANCHI_CHECK(s == "PGL", "group must be PSL or PGL");
    return GroupKind::PGL;
}

}  // namespace

CellComplex parse_cellcomplex_json(const std::string& text) {
    json j = json::parse(text);
    BIANCHI_CHECK(j.value("schema", "") == "bianchi-cell-complex-v1",
                  "not a cell complex data file");
    CellComplex cx;
    cx.d = j.at("d").get<int>();
    BIANCHI_CHECK(valid_d(cx.d), "unsupported ring in data file");
    cx.kind = group_kind_from(j.at("group"));
    cx.name = j.at("name").get<std::string>();

    for (const json& g : j.at("generators")) {
        cx.gen_names.push_back(g.at("name").get<std::string>());
        cx.gens.push_back(mat2_from(g.at("matrix"), cx.d));
    }

    for (const json& v : j.at("vertices")) {
        VertexCell cell;
        cell.name = v.at("name").get<std::string>();
        cell.stab_gens = gen_list(v.at("stabilizer"), cx.gen_names);
        for (const json& r : v.at("relators")) cell.relators.push_back(json_word(r, cx.gen_names));
        cell.order = v.at("order").get<long>();
        cx.vertices.push_back(std::move(cell));
    }

    for (const json& e : j.at("edges")) {
        EdgeCell cell;
        cell.name = e.at("name").get<std::string>();
        auto parse_end = [&](const json& end) {
            EdgeEnd out;
            out.vertex = vertex_index(cx, end.at("vertex").get<std::string>());
            out.transport = json_word(end.at("transport"), cx.gen_names);
            return out;
        };
        cell.from = parse_end(e.at("from"));
        cell.to = parse_end(e.at("to"));
        cell.stab_gens = gen_list(e.at("stabilizer"), cx.gen_names);
        cell.order = e.at("order").get<long>();
        cx.edges.push_back(std::move(cell));
    }

    for (const json& s : j.at("face")) {
        FaceSide side;
        side.edge = edge_index(cx, s.at("edge").get<std::string>());
        side.sign = s.at("sign").get<int>();
        side.transport = json_word(s.at("transport"), cx.gen_names);
        cx.face.push_back(side);
    }

    validate_cellcomplex(cx);
    return cx;
}

GroupPresentation parse_presentation_json(const std::string& text) {
    json j = json::parse(text);
    BIANCHI_CHECK(j.value("schema", "") == "bianchi-presentation-v1",
                  "not a presentation data file");
    GroupPresentation p;
    p.d = j.at("d").get<int>();
    BIANCHI_CHECK(valid_d(p.d), "unsupported ring in data file");
    p.kind = group_kind_from(j.at("group"));
    p.name = j.at("name").get<std::string>();
    for (const json& g : j.at("generators")) {
        p.gen_names.push_back(g.at("name").get<std::string>());
        p.gens.push_back(mat2_from(g.at("matrix"), p.d));
    }
    for (const json& r : j.at("relators")) p.relators.push_back(json_word(r, p.gen_names));
    p.validate();
    return p;
}

namespace {

std::string complex_data_name(int d, GroupKind kind) {
    std::ostringstream os;
    os << (kind == GroupKind::PSL ? "psl2" : "pgl2") << "_o" << d << "_complex.json";
    return os.str();
}

}  // namespace

CellComplex load_cellcomplex(int d, GroupKind kind) {
    BIANCHI_CHECK(kind == GroupKind::PGL || d == 2,
                  "cell complexes are available for PGL over every ring and for PSL over "
                  "the d=2 ring only");
    return parse_cellcomplex_json(embedded_data_file(complex_data_name(d, kind)));
}

GroupPresentation load_presentation(int d, GroupKind kind) {
    BIANCHI_CHECK(valid_d(d), "unsupported ring");
    if (kind == GroupKind::PGL || d == 2)
        return presentation_from_complex(load_cellcomplex(d, kind));
    return reidemeister_schreier_even_det(load_presentation(d, GroupKind::PGL));
}

GroupPresentation load_presentation_named(const std::string& data_name) {
    return parse_presentation_json(embedded_data_file(data_name));
}

}  // namespace bianchi
