#include "ricci/metric.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace ricci {

namespace {

constexpr double kShapeTol = 1e-12;       // fixed zero/one entries
constexpr double kSingularRel = 1e-12;    // |det| guard relative to max-entry^4

std::string entry_name(int i, int j) {
    return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace

std::string_view to_string(ClassId id) {
    switch (id) {
        case ClassId::A1: return "A1";
        case ClassId::A2iv: return "A2iv";
        case ClassId::A3: return "A3";
        case ClassId::A4: return "A4";
        case ClassId::A5: return "A5";
        case ClassId::A6: return "A6";
        case ClassId::A7i: return "A7i";
        case ClassId::A7ii: return "A7ii";
        case ClassId::A8: return "A8";
        case ClassId::A9ii: return "A9ii";
    }
    return "?";
}

std::optional<ClassId> parse_class_id(std::string_view text) {
    for (ClassId id : all_class_ids) {
        if (text == to_string(id)) return id;
    }
    return std::nullopt;
}

bool DiagonalMetric::positive_finite() const {
    for (int i = 0; i < 4; ++i) {
        const double v = (*this)[i];
        if (!(v > 0.0) || !std::isfinite(v)) return false;
    }
    return true;
}

void require_valid(const DiagonalMetric& g) {
    if (!g.positive_finite()) {
        throw std::domain_error("metric components must be strictly positive and finite");
    }
}

Mat4 Mat4::identity() {
    Mat4 m;
    for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
    return m;
}

double Mat4::max_abs() const {
    double v = 0.0;
    for (const auto& row : e)
        for (double x : row) v = std::max(v, std::abs(x));
    return v;
}

Mat4 operator*(const Mat4& lhs, const Mat4& rhs) {
    Mat4 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += lhs(i, k) * rhs(k, j);
            out(i, j) = s;
        }
    return out;
}

bool approx_equal(const Mat4& lhs, const Mat4& rhs, double tol) {
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (std::abs(lhs(i, j) - rhs(i, j)) > tol) return false;
    return true;
}

double det(const Mat4& m) {
    auto a = m.e;
    double sign = 1.0;
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 4; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        if (a[pivot][col] == 0.0) return 0.0;
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            sign = -sign;
        }
        for (int row = col + 1; row < 4; ++row) {
            const double f = a[row][col] / a[col][col];
            for (int k = col; k < 4; ++k) a[row][k] -= f * a[col][k];
        }
    }
    double d = sign;
    for (int i = 0; i < 4; ++i) d *= a[i][i];
    return d;
}

Mat4 inverse(const Mat4& m) {
    const double scale = m.max_abs();
    const double guard = kSingularRel * scale * scale * scale * scale;
    if (scale == 0.0 || std::abs(det(m)) <= guard) {
        throw std::domain_error("singular frame matrix");
    }
    auto a = m.e;
    Mat4 inv = Mat4::identity();
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 4; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            std::swap(inv.e[static_cast<std::size_t>(pivot)], inv.e[static_cast<std::size_t>(col)]);
        }
        const double p = a[col][col];
        for (int k = 0; k < 4; ++k) {
            a[col][k] /= p;
            inv(col, k) /= p;
        }
        for (int row = 0; row < 4; ++row) {
            if (row == col) continue;
            const double f = a[row][col];
            if (f == 0.0) continue;
            for (int k = 0; k < 4; ++k) {
                a[row][k] -= f * a[col][k];
                inv(row, k) -= f * inv(col, k);
            }
        }
    }
    return inv;
}

std::size_t SymmetricMetric4::index(int i, int j) {
    if (i > j) std::swap(i, j);
    static constexpr int row_offset[4] = {0, 4, 7, 9};
    return static_cast<std::size_t>(row_offset[i] + (j - i));
}

SymmetricMetric4 SymmetricMetric4::from_diagonal(const DiagonalMetric& g) {
    SymmetricMetric4 m;
    for (int i = 0; i < 4; ++i) m(i, i) = g[i];
    return m;
}

SymmetricMetric4 operator-(const SymmetricMetric4& lhs, const SymmetricMetric4& rhs) {
    SymmetricMetric4 out;
    for (std::size_t k = 0; k < out.tri.size(); ++k) out.tri[k] = lhs.tri[k] - rhs.tri[k];
    return out;
}

double norm_sq(const DiagonalMetric& g, const SymmetricMetric4& h) {
    require_valid(g);
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double r = h(i, i) / g[i];
        s += r * r;
    }
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) s += 2.0 * h(i, j) * h(i, j) / (g[i] * g[j]);
    return s;
}

double norm_sq_general(const SymmetricMetric4& g, const SymmetricMetric4& h) {
    Mat4 gm;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) gm(i, j) = g(i, j);
    const Mat4 ginv = inverse(gm);
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) s += ginv(i, k) * ginv(j, l) * h(i, j) * h(k, l);
    return s;
}

TransitionMatrix frame_quotient(const FrameMatrix& lam, const FrameMatrix& lam_prime) {
    return lam * inverse(lam_prime);
}

SymmetricMetric4 congruence_transport(const TransitionMatrix& t_matrix, const DiagonalMetric& d) {
    SymmetricMetric4 out;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += t_matrix(i, k) * d[k] * t_matrix(j, k);
            out(i, j) = s;
        }
    return out;
}

std::size_t frame_arity(ClassId id) {
    switch (id) {
        case ClassId::A1: return 0;
        case ClassId::A2iv: return 3;
        case ClassId::A3: return 3;
        case ClassId::A4: return 6;
        case ClassId::A5: return 4;
        case ClassId::A6: return 5;
        case ClassId::A7i: return 3;
        case ClassId::A7ii: return 4;
        case ClassId::A8: return 3;
        case ClassId::A9ii: return 1;
    }
    return 0;
}

FrameParams zero_frame(ClassId id) {
    return FrameParams{id, std::vector<double>(frame_arity(id), 0.0)};
}

std::vector<std::size_t> excluded_frame_indices(ClassId id) {
    switch (id) {
        case ClassId::A4: return {3};      // d
        case ClassId::A7ii: return {1};    // b
        case ClassId::A8: return {0, 1};   // a, b
        case ClassId::A9ii: return {0};    // a
        default: return {};
    }
}

namespace {

// One slot of a frame shape: position, sign, and which named entry (1..6,
// 0 = fixed value) fills it.
struct ShapeSlot {
    int i;
    int j;
    int entry;    // 0 for fixed cells; otherwise entry index 1..6
    double sign;  // multiplies the named entry
};

struct FrameShape {
    // free / repeated cells; every cell not listed is fixed at identity
    std::vector<ShapeSlot> slots;
};

const FrameShape& frame_shape(ClassId id) {
    static const FrameShape a2{{{3, 0, 4, 1.0}, {3, 1, 5, 1.0}, {3, 2, 6, 1.0}}};
    static const FrameShape a4{{{0, 1, 2, 1.0},
                                {0, 2, 3, 1.0},
                                {2, 1, 1, 1.0},
                                {3, 0, 4, 1.0},
                                {3, 1, 5, 1.0},
                                {3, 2, 6, 1.0}}};
    static const FrameShape a5{{{0, 1, 2, 1.0}, {3, 0, 4, 1.0}, {3, 1, 5, 1.0}, {3, 2, 6, 1.0}}};
    static const FrameShape a6{{{0, 1, 1, 1.0},
                                {1, 2, 1, 1.0},
                                {0, 2, 3, 1.0},
                                {3, 0, 4, 1.0},
                                {3, 1, 5, 1.0},
                                {3, 2, 6, 1.0}}};
    static const FrameShape a7i{{{0, 1, 3, -1.0},
                                 {1, 3, 3, 1.0},
                                 {0, 2, 1, 1.0},
                                 {2, 3, 1, 1.0},
                                 {0, 3, 6, 1.0}}};
    static const FrameShape a7ii{{{0, 1, 3, -1.0}, {1, 3, 3, 1.0}, {1, 2, 2, 1.0}, {0, 3, 6, 1.0}}};
    static const FrameShape a8{{{0, 1, 3, 1.0},
                                {1, 3, 3, 1.0},
                                {0, 2, 1, 1.0},
                                {2, 3, 1, 1.0},
                                {0, 3, 6, 1.0}}};
    static const FrameShape a9ii{{{3, 2, 3, 1.0}}};
    static const FrameShape identity_only{{}};
    switch (id) {
        case ClassId::A1: return identity_only;
        case ClassId::A2iv: return a2;
        case ClassId::A3: return a2;
        case ClassId::A4: return a4;
        case ClassId::A5: return a5;
        case ClassId::A6: return a6;
        case ClassId::A7i: return a7i;
        case ClassId::A7ii: return a7ii;
        case ClassId::A8: return a8;
        case ClassId::A9ii: return a9ii;
    }
    return identity_only;
}

}  // namespace

void check_frame_shape(ClassId id, const FrameMatrix& m) {
    const FrameShape& shape = frame_shape(id);
    bool free_cell[4][4] = {};
    for (const ShapeSlot& s : shape.slots) free_cell[s.i][s.j] = true;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (free_cell[i][j]) continue;
            const double want = (i == j) ? 1.0 : 0.0;
            if (std::abs(m(i, j) - want) > kShapeTol) {
                std::ostringstream os;
                os << "frame entry " << entry_name(i, j) << " must be " << want << " for class "
                   << to_string(id) << ", got " << m(i, j);
                throw std::invalid_argument(os.str());
            }
        }
    // repeated entries must agree
    double seen[7];
    bool have[7] = {};
    for (const ShapeSlot& s : shape.slots) {
        const double v = m(s.i, s.j) * s.sign;
        if (have[s.entry] && std::abs(seen[s.entry] - v) > kShapeTol) {
            std::ostringstream os;
            os << "frame entry " << entry_name(s.i, s.j) << " is inconsistent with the repeated a"
               << s.entry << " slot for class " << to_string(id);
            throw std::invalid_argument(os.str());
        }
        seen[s.entry] = v;
        have[s.entry] = true;
    }
}

std::array<double, 6> frame_entries(ClassId id, const FrameMatrix& m) {
    check_frame_shape(id, m);
    std::array<double, 6> entries{};
    for (const ShapeSlot& s : frame_shape(id).slots) {
        entries[static_cast<std::size_t>(s.entry - 1)] = m(s.i, s.j) * s.sign;
    }
    return entries;
}

FrameParams reduced_params(ClassId id, const FrameMatrix& lam, const FrameMatrix& lam_prime) {
    const std::array<double, 6> x = frame_entries(id, lam);
    const std::array<double, 6> y = frame_entries(id, lam_prime);
    const double a1 = x[0], a2 = x[1], a3 = x[2], a4 = x[3], a5 = x[4], a6 = x[5];
    const double b1 = y[0], b2 = y[1], b3 = y[2], b4 = y[3], b5 = y[4], b6 = y[5];

    FrameParams out = zero_frame(id);
    auto& v = out.values;
    switch (id) {
        case ClassId::A1:
            break;
        case ClassId::A2iv:
        case ClassId::A3:
            v = {a4 - b4, a5 - b5, a6 - b6};
            break;
        case ClassId::A4:
            v = {a1 - b1,
                 a2 - b2 + b1 * b3 - b1 * a3,
                 a3 - b3,
                 a4 - b4,
                 a5 - b5 + b2 * b4 - b2 * a4 + b1 * b6 - b1 * a6 + b1 * b3 * a4 - b1 * b3 * b4,
                 a6 - b6 + b3 * b4 - b3 * a4};
            break;
        case ClassId::A5:
            v = {a2 - b2, a4 - b4, a5 - b5 + b2 * b4 - b2 * a4, a6 - b6};
            break;
        case ClassId::A6:
            v = {a1 - b1,
                 a4 - b4,
                 a5 - b5 + b1 * b4 - b1 * a4,
                 a6 - b6 + b1 * b5 - b1 * a5 + b1 * b1 * a4 - b1 * b1 * b4 + b3 * b4 - b3 * a4,
                 a3 - b3 + b1 * b1 - a1 * b1};
            break;
        case ClassId::A7i:
            v = {-a3 + b3, a1 - b1, a6 - b6 + a3 * b3 - a1 * b1 - b3 * b3 + b1 * b1};
            break;
        case ClassId::A7ii:
            v = {b3 - a3, a2 - b2, b2 * a3 - b2 * b3, a6 - b6 + a3 * b3 - b3 * b3};
            break;
        case ClassId::A8:
            v = {a3 - b3, a1 - b1, a6 - b6 - a1 * b1 - a3 * b3 + b1 * b1 + b3 * b3};
            break;
        case ClassId::A9ii:
            v = {a3 - b3};
            break;
    }

    // cross-check the closed forms against the computed quotient
    const TransitionMatrix rebuilt = transition_from_params(out);
    const TransitionMatrix quotient = frame_quotient(lam, lam_prime);
    const double scale = std::max(1.0, std::max(lam.max_abs(), lam_prime.max_abs()));
    if (!approx_equal(rebuilt, quotient, 1e-10 * scale * scale * scale)) {
        throw std::logic_error("reduced parameters disagree with the computed frame quotient");
    }
    return out;
}

TransitionMatrix transition_from_params(const FrameParams& params) {
    if (params.values.size() != frame_arity(params.cls)) {
        throw std::invalid_argument("frame parameter arity does not match class");
    }
    const auto& v = params.values;
    Mat4 m = Mat4::identity();
    switch (params.cls) {
        case ClassId::A1:
            break;
        case ClassId::A2iv:
        case ClassId::A3:
            m(3, 0) = v[0];
            m(3, 1) = v[1];
            m(3, 2) = v[2];
            break;
        case ClassId::A4:
            m(0, 1) = v[1];
            m(0, 2) = v[2];
            m(2, 1) = v[0];
            m(3, 0) = v[3];
            m(3, 1) = v[4];
            m(3, 2) = v[5];
            break;
        case ClassId::A5:
            m(0, 1) = v[0];
            m(3, 0) = v[1];
            m(3, 1) = v[2];
            m(3, 2) = v[3];
            break;
        case ClassId::A6:
            m(0, 1) = v[0];
            m(1, 2) = v[0];
            m(0, 2) = v[4];
            m(3, 0) = v[1];
            m(3, 1) = v[2];
            m(3, 2) = v[3];
            break;
        case ClassId::A7i:
            m(0, 1) = v[0];
            m(0, 2) = v[1];
            m(0, 3) = v[2];
            m(1, 3) = -v[0];
            m(2, 3) = v[1];
            break;
        case ClassId::A7ii:
            m(0, 1) = v[0];
            m(0, 2) = v[2];
            m(0, 3) = v[3];
            m(1, 2) = v[1];
            m(1, 3) = -v[0];
            break;
        case ClassId::A8:
            m(0, 1) = v[0];
            m(0, 2) = v[1];
            m(0, 3) = v[2];
            m(1, 3) = v[0];
            m(2, 3) = v[1];
            break;
        case ClassId::A9ii:
            m(3, 2) = v[0];
            break;
    }
    return m;
}

std::vector<double> norm_expansion_terms(ClassId id, const FrameParams& frame,
                                         const DiagonalMetric& g, const DiagonalMetric& gbar_beta) {
    require_valid(g);
    if (frame.cls != id || frame.values.size() != frame_arity(id)) {
        throw std::invalid_argument("frame parameters do not match class");
    }
    const double A = g.a, B = g.b, C = g.c, D = g.d;
    const double Ab = gbar_beta.a, Bb = gbar_beta.b, Cb = gbar_beta.c, Db = gbar_beta.d;
    const auto& v = frame.values;
    auto sq = [](double x) { return x * x; };

    switch (id) {
        case ClassId::A1:
            return {sq((A - Ab) / A), sq((B - Bb) / B), sq((C - Cb) / C), sq((D - Db) / D)};
        case ClassId::A2iv:
        case ClassId::A3: {
            const double a = v[0], b = v[1], c = v[2];
            return {sq((A - Ab) / A),
                    sq((B - Bb) / B),
                    sq((C - Cb) / C),
                    2.0 * sq(Ab * a) / (A * D),
                    2.0 * sq(Bb * b) / (B * D),
                    2.0 * sq(Cb * c) / (C * D),
                    sq((a * a * Ab + b * b * Bb + c * c * Cb + Db - D) / D)};
        }
        case ClassId::A4: {
            const double a = v[0], b = v[1], c = v[2], d = v[3], e = v[4], f = v[5];
            return {sq((Ab + b * b * Bb + c * c * Cb - A) / A),
                    sq((B - Bb) / B),
                    sq((C - Cb - a * a * Bb) / C),
                    sq((d * d * Ab + e * e * Bb + f * f * Cb + Db - D) / D),
                    2.0 * sq(b * Bb) / (A * B),
                    2.0 * sq(b * Bb * a + c * Cb) / (A * C),
                    2.0 * sq(d * Ab + b * Bb * e + c * Cb * f) / (A * D),
                    2.0 * sq(a * Bb) / (B * C),
                    2.0 * sq(e * Bb) / (B * D),
                    2.0 * sq(a * Bb * e + f * Cb) / (C * D)};
        }
        case ClassId::A5: {
            const double a = v[0], b = v[1], c = v[2], d = v[3];
            return {sq((A - Ab - a * a * Bb) / A),
                    sq((B - Bb) / B),
                    sq((C - Cb) / C),
                    sq((b * b * Ab + c * c * Bb + d * d * Cb + Db - D) / D),
                    2.0 * sq(a * Bb) / (A * B),
                    2.0 * sq(b * Ab + a * c * Bb) / (A * D),
                    2.0 * sq(c * Bb) / (B * D),
                    2.0 * sq(d * Cb) / (C * D)};
        }
        case ClassId::A6: {
            const double a = v[0], b = v[1], c = v[2], d = v[3], e = v[4];
            return {sq((A - Ab - a * a * Bb - e * e * Cb) / A),
                    sq((B - Bb - a * a * Cb) / B),
                    sq((C - Cb) / C),
                    sq((b * b * Ab + c * c * Bb + d * d * Cb + Db - D) / D),
                    2.0 * sq(a * Bb + a * e * Cb) / (A * B),
                    2.0 * sq(e * Cb) / (A * C),
                    2.0 * sq(b * Ab + a * c * Bb + d * e * Cb) / (A * D),
                    2.0 * sq(a * Cb) / (B * C),
                    2.0 * sq(c * Bb + a * d * Cb) / (B * D),
                    2.0 * sq(d * Cb) / (C * D)};
        }
        case ClassId::A7i: {
            const double a = v[0], b = v[1], c = v[2];
            return {sq((A - Ab - a * a * Bb - b * b * Cb - c * c * Db) / A),
                    sq((B - Bb - a * a * Db) / B),
                    sq((C - Cb - b * b * Db) / C),
                    sq((D - Db) / D),
                    2.0 * sq(a * Bb - a * c * Db) / (A * B),
                    2.0 * sq(b * Cb + b * c * Db) / (A * C),
                    2.0 * sq(c * Db) / (A * D),
                    2.0 * sq(a * b * Db) / (B * C),
                    2.0 * sq(a * Db) / (B * D),
                    2.0 * sq(b * Db) / (C * D)};
        }
        case ClassId::A7ii: {
            const double a = v[0], b = v[1], c = v[2], d = v[3];
            return {sq((A - Ab - a * a * Bb - c * c * Cb - d * d * Db) / A),
                    sq((B - Bb - b * b * Cb - a * a * Db) / B),
                    sq((C - Cb) / C),
                    sq((D - Db) / D),
                    2.0 * sq(a * Bb + b * c * Cb - a * d * Db) / (A * B),
                    2.0 * sq(c * Cb) / (A * C),
                    2.0 * sq(d * Db) / (A * D),
                    2.0 * sq(b * Cb) / (B * C),
                    2.0 * sq(a * Db) / (B * D)};
        }
        case ClassId::A8: {
            const double a = v[0], b = v[1], c = v[2];
            return {sq((A - Ab - a * a * Bb - b * b * Cb - c * c * Db) / A),
                    sq((B - Bb - a * a * Db) / B),
                    sq((C - Cb - b * b * Db) / C),
                    sq((D - Db) / D),
                    2.0 * sq(a * Bb + a * c * Db) / (A * B),
                    2.0 * sq(b * Cb + b * c * Db) / (A * C),
                    2.0 * sq(c * Db) / (A * D),
                    2.0 * sq(a * b * Db) / (B * C),
                    2.0 * sq(a * Db) / (B * D),
                    2.0 * sq(b * Db) / (C * D)};
        }
        case ClassId::A9ii: {
            const double a = v[0];
            return {sq((A - Ab) / A),
                    sq((B - Bb) / B),
                    sq((C - Cb) / C),
                    sq((D - Db - a * a * Cb) / D),
                    2.0 * sq(a * Cb) / (C * D)};
        }
    }
    return {};
}

}  // namespace ricci
