#include "daefc/ratmat.hpp"

#include "daefc/errors.hpp"

namespace daefc {

RatMat::RatMat(int rows, int cols) : rows_(rows), cols_(cols), entries_(rows * cols) {
    if (rows < 0 || cols < 0)
        throw PreconditionError("negative matrix dimension");
}

RatMat::RatMat(int rows, int cols, std::vector<RatFun> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (static_cast<size_t>(rows) * cols != entries_.size())
        throw PreconditionError("matrix entry count does not match dimensions");
}

RatMat RatMat::identity(int n) {
    RatMat out(n, n);
    for (int i = 0; i < n; ++i)
        out(i, i) = RatFun::one();
    return out;
}

const RatFun& RatMat::operator()(int r, int c) const {
    return entries_[static_cast<size_t>(r) * cols_ + c];
}

RatFun& RatMat::operator()(int r, int c) {
    return entries_[static_cast<size_t>(r) * cols_ + c];
}

RatMat RatMat::operator+(const RatMat& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw PreconditionError("matrix addition dimension mismatch");
    RatMat out(rows_, cols_);
    for (size_t i = 0; i < entries_.size(); ++i)
        out.entries_[i] = entries_[i] + other.entries_[i];
    return out;
}

RatMat RatMat::operator-(const RatMat& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw PreconditionError("matrix subtraction dimension mismatch");
    RatMat out(rows_, cols_);
    for (size_t i = 0; i < entries_.size(); ++i)
        out.entries_[i] = entries_[i] - other.entries_[i];
    return out;
}

RatMat RatMat::operator*(const RatMat& other) const {
    if (cols_ != other.rows_)
        throw PreconditionError("matrix product dimension mismatch");
    RatMat out(rows_, other.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < other.cols_; ++j) {
            RatFun acc;
            for (int k = 0; k < cols_; ++k)
                acc = acc + (*this)(i, k) * other(k, j);
            out(i, j) = std::move(acc);
        }
    return out;
}

RatMat RatMat::transpose() const {
    RatMat out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            out(j, i) = (*this)(i, j);
    return out;
}

RatMat RatMat::block(int row0, int col0, int nrows, int ncols) const {
    RatMat out(nrows, ncols);
    for (int i = 0; i < nrows; ++i)
        for (int j = 0; j < ncols; ++j)
            out(i, j) = (*this)(row0 + i, col0 + j);
    return out;
}

void RatMat::set_block(int row0, int col0, const RatMat& src) {
    for (int i = 0; i < src.rows(); ++i)
        for (int j = 0; j < src.cols(); ++j)
            (*this)(row0 + i, col0 + j) = src(i, j);
}

namespace {

struct PolyGrid {
    int rows = 0;
    int cols = 0;
    std::vector<Poly> cell;
    Poly row_multiplier_product = Poly::one();

    Poly& at(int r, int c) { return cell[static_cast<size_t>(r) * cols + c]; }
    const Poly& at(int r, int c) const { return cell[static_cast<size_t>(r) * cols + c]; }
};

// Clears denominators row by row; the product of the multipliers is kept so
// determinants of the original matrix can be recovered.
PolyGrid clear_denominators(const RatMat& m) {
    PolyGrid g;
    g.rows = m.rows();
    g.cols = m.cols();
    g.cell.resize(static_cast<size_t>(g.rows) * g.cols);
    for (int i = 0; i < g.rows; ++i) {
        Poly mult = Poly::one();
        for (int j = 0; j < g.cols; ++j)
            mult = lcm(mult, m(i, j).den());
        for (int j = 0; j < g.cols; ++j)
            g.at(i, j) = m(i, j).num() * mult.exact_div(m(i, j).den());
        g.row_multiplier_product = g.row_multiplier_product * mult;
    }
    return g;
}

struct BareissResult {
    int rank = 0;
    int sign = 1;
    Poly last_pivot = Poly::one(); // determinant of the cleared matrix when full rank
};

// Fraction-free elimination with full pivoting; row/column swaps only
// reorder, so the exact-division property of the Bareiss recurrence holds.
BareissResult bareiss(PolyGrid g) {
    BareissResult res;
    const int steps = std::min(g.rows, g.cols);
    Poly prev = Poly::one();
    for (int k = 0; k < steps; ++k) {
        int pr = -1, pc = -1;
        for (int i = k; i < g.rows && pr < 0; ++i)
            for (int j = k; j < g.cols; ++j)
                if (!g.at(i, j).is_zero()) {
                    pr = i;
                    pc = j;
                    break;
                }
        if (pr < 0)
            break;
        if (pr != k) {
            for (int j = 0; j < g.cols; ++j)
                std::swap(g.at(pr, j), g.at(k, j));
            res.sign = -res.sign;
        }
        if (pc != k) {
            for (int i = 0; i < g.rows; ++i)
                std::swap(g.at(i, pc), g.at(i, k));
            res.sign = -res.sign;
        }
        for (int i = k + 1; i < g.rows; ++i) {
            for (int j = k + 1; j < g.cols; ++j)
                g.at(i, j) = (g.at(k, k) * g.at(i, j) - g.at(i, k) * g.at(k, j)).exact_div(prev);
            g.at(i, k) = Poly::zero();
        }
        prev = g.at(k, k);
        res.rank += 1;
    }
    res.last_pivot = prev;
    return res;
}

} // namespace

int rank(const RatMat& m) {
    if (m.rows() == 0 || m.cols() == 0)
        return 0;
    return bareiss(clear_denominators(m)).rank;
}

RatFun determinant(const RatMat& m) {
    if (m.rows() != m.cols())
        throw PreconditionError("determinant of a non-square matrix");
    if (m.rows() == 0)
        return RatFun::one();
    PolyGrid g = clear_denominators(m);
    Poly scale = g.row_multiplier_product;
    BareissResult res = bareiss(std::move(g));
    if (res.rank < m.rows())
        return RatFun::zero();
    Poly num = res.sign > 0 ? res.last_pivot : -res.last_pivot;
    return RatFun(std::move(num), std::move(scale));
}

Poly poly_determinant(const RatMat& m) {
    RatFun d = determinant(m);
    if (!(d.den() == Poly::one()))
        throw PreconditionError("determinant is not a polynomial");
    return d.num();
}

namespace {

// Gauss-Jordan over the rational-function field on [a | b]; exact since
// RatFun is a field. Returns x with a x = b.
RatMat field_solve(const RatMat& a, const RatMat& b) {
    if (a.rows() != a.cols())
        throw PreconditionError("solve requires a square matrix");
    if (a.rows() != b.rows())
        throw PreconditionError("solve right-hand side dimension mismatch");
    const int n = a.rows();
    const int w = b.cols();
    RatMat aug(n, n + w);
    aug.set_block(0, 0, a);
    aug.set_block(0, n, b);
    for (int k = 0; k < n; ++k) {
        int pivot = -1;
        for (int i = k; i < n; ++i)
            if (!aug(i, k).is_zero()) {
                pivot = i;
                break;
            }
        if (pivot < 0)
            throw PreconditionError("singular matrix in exact solve");
        if (pivot != k)
            for (int j = 0; j < n + w; ++j)
                std::swap(aug(pivot, j), aug(k, j));
        RatFun inv = aug(k, k).recip();
        for (int j = k; j < n + w; ++j)
            aug(k, j) = aug(k, j) * inv;
        for (int i = 0; i < n; ++i) {
            if (i == k || aug(i, k).is_zero())
                continue;
            RatFun factor = aug(i, k);
            for (int j = k; j < n + w; ++j)
                aug(i, j) = aug(i, j) - factor * aug(k, j);
        }
    }
    return aug.block(0, n, n, w);
}

} // namespace

RatMat inverse(const RatMat& m) {
    if (m.rows() != m.cols())
        throw PreconditionError("inverse of a non-square matrix");
    return field_solve(m, RatMat::identity(m.rows()));
}

RatMat solve(const RatMat& a, const RatMat& b) {
    return field_solve(a, b);
}

RatMat left_inverse(const RatMat& m) {
    if (m.rows() < m.cols())
        throw PreconditionError("no left inverse: fewer rows than columns");
    RatMat mt = m.transpose();
    try {
        return field_solve(mt * m, mt);
    } catch (const PreconditionError&) {
        // m^T m singular over R(s) iff m lacks full column rank (the field
        // is formally real, so kernels of m^T m and m coincide).
        throw PreconditionError("no left inverse: matrix lacks full column rank");
    }
}

QMat::QMat(int rows, int cols) : rows_(rows), cols_(cols), entries_(rows * cols) {
    if (rows < 0 || cols < 0)
        throw PreconditionError("negative matrix dimension");
}

QMat::QMat(int rows, int cols, std::vector<Rat> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (static_cast<size_t>(rows) * cols != entries_.size())
        throw PreconditionError("matrix entry count does not match dimensions");
}

QMat QMat::identity(int n) {
    QMat out(n, n);
    for (int i = 0; i < n; ++i)
        out(i, i) = 1;
    return out;
}

QMat QMat::from_ints(int rows, int cols, std::initializer_list<int> entries) {
    std::vector<Rat> e;
    e.reserve(entries.size());
    for (int v : entries)
        e.emplace_back(v);
    return QMat(rows, cols, std::move(e));
}

const Rat& QMat::operator()(int r, int c) const {
    return entries_[static_cast<size_t>(r) * cols_ + c];
}

Rat& QMat::operator()(int r, int c) {
    return entries_[static_cast<size_t>(r) * cols_ + c];
}

QMat QMat::operator+(const QMat& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw PreconditionError("matrix addition dimension mismatch");
    QMat out(rows_, cols_);
    for (size_t i = 0; i < entries_.size(); ++i)
        out.entries_[i] = entries_[i] + other.entries_[i];
    return out;
}

QMat QMat::operator-(const QMat& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw PreconditionError("matrix subtraction dimension mismatch");
    QMat out(rows_, cols_);
    for (size_t i = 0; i < entries_.size(); ++i)
        out.entries_[i] = entries_[i] - other.entries_[i];
    return out;
}

QMat QMat::operator*(const QMat& other) const {
    if (cols_ != other.rows_)
        throw PreconditionError("matrix product dimension mismatch");
    QMat out(rows_, other.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < other.cols_; ++j) {
            Rat acc(0);
            for (int k = 0; k < cols_; ++k)
                acc += (*this)(i, k) * other(k, j);
            out(i, j) = std::move(acc);
        }
    return out;
}

QMat QMat::transpose() const {
    QMat out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            out(j, i) = (*this)(i, j);
    return out;
}

RatMat QMat::to_ratmat() const {
    RatMat out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            out(i, j) = RatFun((*this)(i, j));
    return out;
}

Eigen::MatrixXd QMat::to_float() const {
    Eigen::MatrixXd out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            out(i, j) = (*this)(i, j).get_d();
    return out;
}

int rank(const QMat& m) {
    QMat g = m;
    int rk = 0;
    for (int col = 0; col < g.cols() && rk < g.rows(); ++col) {
        int pivot = -1;
        for (int i = rk; i < g.rows(); ++i)
            if (g(i, col) != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0)
            continue;
        if (pivot != rk)
            for (int j = 0; j < g.cols(); ++j)
                std::swap(g(pivot, j), g(rk, j));
        for (int i = rk + 1; i < g.rows(); ++i) {
            if (g(i, col) == 0)
                continue;
            Rat factor = g(i, col) / g(rk, col);
            for (int j = col; j < g.cols(); ++j)
                g(i, j) -= factor * g(rk, j);
        }
        ++rk;
    }
    return rk;
}

QMat inverse(const QMat& m) {
    if (m.rows() != m.cols())
        throw PreconditionError("inverse of a non-square matrix");
    const int n = m.rows();
    QMat aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    for (int k = 0; k < n; ++k) {
        int pivot = -1;
        for (int i = k; i < n; ++i)
            if (aug(i, k) != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0)
            throw PreconditionError("singular rational matrix");
        if (pivot != k)
            for (int j = 0; j < 2 * n; ++j)
                std::swap(aug(pivot, j), aug(k, j));
        Rat inv = 1 / aug(k, k);
        for (int j = k; j < 2 * n; ++j)
            aug(k, j) *= inv;
        for (int i = 0; i < n; ++i) {
            if (i == k || aug(i, k) == 0)
                continue;
            Rat factor = aug(i, k);
            for (int j = k; j < 2 * n; ++j)
                aug(i, j) -= factor * aug(k, j);
        }
    }
    QMat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out(i, j) = aug(i, n + j);
    return out;
}

QMat eval(const RatMat& m, const Rat& at) {
    QMat out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            out(i, j) = m(i, j).eval(at);
    return out;
}

} // namespace daefc
