#include "momenta/gauge2d.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>

#include <Eigen/SparseCholesky>
#include <json.hpp>

#include "momenta/symplin.hpp"

namespace momenta {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Compensated sum of products: exact product errors via fma, Neumaier update.
/// Pairings over thousands of faces then round like a single product.
class ProductSum
{
  public:
    void add(double a, double b)
    {
        const double p = a * b;
        comp_ += std::fma(a, b, -p);
        add_exact(p);
    }
    double value() const { return sum_ + comp_; }

  private:
    void add_exact(double x)
    {
        const double t = sum_ + x;
        comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
        sum_ = t;
    }
    double sum_ = 0.0;
    double comp_ = 0.0;
};

void accumulate_cup(ProductSum& acc, const SurfaceMesh& mesh, const Vec& alpha, const Vec& beta)
{
    for (Eigen::Index f = 0; f < mesh.n_faces(); ++f)
    {
        auto s = mesh.sorted_face(f);
        Eigen::Index e01 = mesh.edge_index(s[0], s[1]), e12 = mesh.edge_index(s[1], s[2]);
        acc.add(mesh.face_sign(f) * alpha(e01), beta(e12));
    }
}

void accumulate_kappa(ProductSum& acc, const SurfaceMesh& mesh, const Vec& sigma, const Vec& phi)
{
    for (Eigen::Index f = 0; f < mesh.n_faces(); ++f)
        acc.add(phi(mesh.sorted_face(f)[0]), sigma(f));
}

}  // namespace

// ---------------------------------------------------------------------------
// Mesh

SurfaceMesh::SurfaceMesh(Eigen::Index n_vertices, std::vector<Face> faces)
    : n_vertices_(n_vertices), faces_(std::move(faces))
{
    if (n_vertices_ <= 0 || faces_.empty())
        throw InputError("mesh: need vertices and faces");
    std::map<Edge, Eigen::Index> index;
    std::map<std::pair<Eigen::Index, Eigen::Index>, int> directed;  // oriented edge -> uses
    for (const Face& f : faces_)
    {
        for (Eigen::Index v : f)
            if (v < 0 || v >= n_vertices_)
                throw InputError("mesh: face references a missing vertex");
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
            throw InputError("mesh: degenerate face");
        Face s = f;
        std::sort(s.begin(), s.end());
        // Sign of the permutation taking f to sorted order: count inversions.
        int inv = (f[0] > f[1]) + (f[0] > f[2]) + (f[1] > f[2]);
        sorted_.push_back(s);
        sign_.push_back(inv % 2 == 0 ? 1 : -1);
        for (int i = 0; i < 3; ++i)
        {
            Eigen::Index a = f[static_cast<std::size_t>(i)], b = f[static_cast<std::size_t>((i + 1) % 3)];
            if (++directed[{a, b}] > 1)
                throw InputError("mesh: inconsistent orientation (an oriented edge is used twice)");
            index.emplace(Edge{std::min(a, b), std::max(a, b)}, 0);
        }
    }
    Eigen::Index e = 0;
    for (auto& [edge, idx] : index)
    {
        idx = e++;
        edges_.push_back(edge);
        // Closed surface: each edge has both orientations used exactly once.
        if (!directed.count({edge[0], edge[1]}) || !directed.count({edge[1], edge[0]}))
            throw InputError("mesh: edge on a boundary (not exactly two faces with opposite orientations)");
    }

    std::vector<Eigen::Triplet<double>> t1, t2;
    for (Eigen::Index j = 0; j < n_edges(); ++j)
    {
        t1.emplace_back(edges_[static_cast<std::size_t>(j)][0], j, -1.0);
        t1.emplace_back(edges_[static_cast<std::size_t>(j)][1], j, 1.0);
    }
    for (Eigen::Index fi = 0; fi < n_faces(); ++fi)
    {
        const Face& f = faces_[static_cast<std::size_t>(fi)];
        for (int i = 0; i < 3; ++i)
        {
            Eigen::Index a = f[static_cast<std::size_t>(i)], b = f[static_cast<std::size_t>((i + 1) % 3)];
            t2.emplace_back(index.at(Edge{std::min(a, b), std::max(a, b)}), fi, a < b ? 1.0 : -1.0);
        }
    }
    b1_.resize(n_vertices_, n_edges());
    b1_.setFromTriplets(t1.begin(), t1.end());
    b2_.resize(n_edges(), n_faces());
    b2_.setFromTriplets(t2.begin(), t2.end());

    // Connectivity via the edge graph.
    std::vector<std::vector<Eigen::Index>> adj(static_cast<std::size_t>(n_vertices_));
    for (const Edge& ed : edges_)
    {
        adj[static_cast<std::size_t>(ed[0])].push_back(ed[1]);
        adj[static_cast<std::size_t>(ed[1])].push_back(ed[0]);
    }
    std::vector<bool> seen(static_cast<std::size_t>(n_vertices_), false);
    std::queue<Eigen::Index> q;
    q.push(0);
    seen[0] = true;
    Eigen::Index count = 1;
    while (!q.empty())
    {
        Eigen::Index v = q.front();
        q.pop();
        for (Eigen::Index w : adj[static_cast<std::size_t>(v)])
            if (!seen[static_cast<std::size_t>(w)])
            {
                seen[static_cast<std::size_t>(w)] = true;
                ++count;
                q.push(w);
            }
    }
    if (count != n_vertices_)
        throw InputError("mesh: not connected or has isolated vertices");
    if (euler_characteristic() % 2 != 0 || euler_characteristic() > 2)
        throw InputError("mesh: Euler characteristic is not that of a closed oriented surface");
}

Eigen::Index SurfaceMesh::edge_index(Eigen::Index a, Eigen::Index b) const
{
    Edge key{std::min(a, b), std::max(a, b)};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key)
        return -1;
    return static_cast<Eigen::Index>(it - edges_.begin());
}

std::string SurfaceMesh::to_json() const
{
    nlohmann::json j;
    j["vertices"] = n_vertices_;
    j["faces"] = nlohmann::json::array();
    for (const Face& f : faces_)
        j["faces"].push_back({f[0], f[1], f[2]});
    return j.dump();
}

SurfaceMesh SurfaceMesh::from_json(const std::string& text)
{
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw InputError(std::string("mesh json: ") + e.what());
    }
    if (!j.contains("vertices") || !j.contains("faces") || !j["faces"].is_array())
        throw InputError("mesh json: need 'vertices' and 'faces'");
    std::vector<Face> faces;
    for (const auto& f : j["faces"])
    {
        if (!f.is_array() || f.size() != 3)
            throw InputError("mesh json: faces must be vertex triples");
        faces.push_back({f[0].get<Eigen::Index>(), f[1].get<Eigen::Index>(), f[2].get<Eigen::Index>()});
    }
    return SurfaceMesh(j["vertices"].get<Eigen::Index>(), std::move(faces));
}

SurfaceMesh build_genus_surface(int g, int grid)
{
    if (g < 1)
        throw InputError("build_genus_surface: genus must be at least 1");
    if (grid < 4)
        throw InputError("build_genus_surface: grid must be at least 4");
    const Eigen::Index l = grid;
    const Eigen::Index per = l * l;
    auto vid = [l](Eigen::Index t, Eigen::Index i, Eigen::Index j) { return t * l * l + (i % l) * l + (j % l); };

    // Faces of each torus; the first triangle of square (i, j) is (v00, v10, v11).
    std::vector<std::vector<SurfaceMesh::Face>> tori(static_cast<std::size_t>(g));
    for (Eigen::Index t = 0; t < g; ++t)
        for (Eigen::Index i = 0; i < l; ++i)
            for (Eigen::Index j = 0; j < l; ++j)
            {
                Eigen::Index v00 = vid(t, i, j), v10 = vid(t, i + 1, j), v11 = vid(t, i + 1, j + 1),
                             v01 = vid(t, i, j + 1);
                tori[static_cast<std::size_t>(t)].push_back({v00, v10, v11});
                tori[static_cast<std::size_t>(t)].push_back({v00, v11, v01});
            }

    // Torus t is glued to t + 1 by removing the first triangle of square (2, 2) in t
    // and of square (0, 0) in t + 1, identifying boundaries with reversed orientation.
    std::vector<Eigen::Index> target(static_cast<std::size_t>(g * per));
    for (Eigen::Index v = 0; v < g * per; ++v)
        target[static_cast<std::size_t>(v)] = v;
    auto removed = [&](Eigen::Index t, const SurfaceMesh::Face& f) {
        auto& fs = tori[static_cast<std::size_t>(t)];
        fs.erase(std::remove(fs.begin(), fs.end(), f), fs.end());
    };
    for (Eigen::Index t = 0; t + 1 < g; ++t)
    {
        SurfaceMesh::Face a{vid(t, 2, 2), vid(t, 3, 2), vid(t, 3, 3)};
        SurfaceMesh::Face b{vid(t + 1, 0, 0), vid(t + 1, 1, 0), vid(t + 1, 1, 1)};
        removed(t, a);
        removed(t + 1, b);
        target[static_cast<std::size_t>(b[0])] = a[0];
        target[static_cast<std::size_t>(b[1])] = a[2];
        target[static_cast<std::size_t>(b[2])] = a[1];
    }
    // Compact renumbering in increasing order of surviving vertices.
    std::vector<Eigen::Index> compact(static_cast<std::size_t>(g * per), -1);
    Eigen::Index next = 0;
    for (Eigen::Index v = 0; v < g * per; ++v)
        if (target[static_cast<std::size_t>(v)] == v)
            compact[static_cast<std::size_t>(v)] = next++;
    std::vector<SurfaceMesh::Face> faces;
    for (const auto& fs : tori)
        for (const auto& f : fs)
        {
            SurfaceMesh::Face m;
            for (int i = 0; i < 3; ++i)
                m[static_cast<std::size_t>(i)] =
                    compact[static_cast<std::size_t>(target[static_cast<std::size_t>(f[static_cast<std::size_t>(i)])])];
            faces.push_back(m);
        }
    return SurfaceMesh(next, std::move(faces));
}

// ---------------------------------------------------------------------------
// Cochain operations

Vec coboundary0(const SurfaceMesh& mesh, const Vec& phi)
{
    if (phi.size() != mesh.n_vertices())
        throw InputError("coboundary0: expected a 0-cochain");
    return mesh.boundary1().transpose() * phi;
}

Vec coboundary1(const SurfaceMesh& mesh, const Vec& alpha)
{
    if (alpha.size() != mesh.n_edges())
        throw InputError("coboundary1: expected a 1-cochain");
    return mesh.boundary2().transpose() * alpha;
}

double cup_pairing(const SurfaceMesh& mesh, const Vec& alpha, const Vec& beta)
{
    if (alpha.size() != mesh.n_edges() || beta.size() != mesh.n_edges())
        throw InputError("cup_pairing: expected two 1-cochains");
    ProductSum acc;
    accumulate_cup(acc, mesh, alpha, beta);
    return acc.value();
}

double wedge_form(const SurfaceMesh& mesh, const Vec& alpha, const Vec& beta)
{
    return 0.5 * (cup_pairing(mesh, alpha, beta) - cup_pairing(mesh, beta, alpha));
}

double kappa_pairing(const SurfaceMesh& mesh, const Vec& sigma, const Vec& phi)
{
    if (sigma.size() != mesh.n_faces() || phi.size() != mesh.n_vertices())
        throw InputError("kappa_pairing: expected a 2-cochain and a 0-cochain");
    ProductSum acc;
    accumulate_kappa(acc, mesh, sigma, phi);
    return acc.value();
}

double wrap_angle(double x)
{
    double r = x - kTwoPi * std::round(x / kTwoPi);
    if (r <= -std::numbers::pi)
        r += kTwoPi;
    return r;
}

CurvatureResult curvature_and_chern(const SurfaceMesh& mesh, const Vec& theta)
{
    CurvatureResult out;
    out.plaquette = coboundary1(mesh, theta);
    out.curvature.resize(mesh.n_faces());
    long long wraps = 0;
    for (Eigen::Index f = 0; f < mesh.n_faces(); ++f)
    {
        const double s = out.plaquette(f);
        const double k = std::round(s / kTwoPi);
        out.curvature(f) = s - kTwoPi * k;
        wraps += static_cast<long long>(k);
        const double odd = std::abs(std::remainder(s - std::numbers::pi, kTwoPi));
        if (odd <= 1e-6)
            out.ambiguous_faces.push_back(f);
    }
    out.chern = -wraps;
    return out;
}

Vec gauge_action(const SurfaceMesh& mesh, const Vec& theta, const Vec& phi)
{
    if (theta.size() != mesh.n_edges())
        throw InputError("gauge_action: expected a 1-cochain");
    return theta - coboundary0(mesh, phi);
}

double momentum_relation_residual(const SurfaceMesh& mesh, const Vec& phi, const Vec& alpha)
{
    Vec action = -coboundary0(mesh, phi);
    Vec dj = -coboundary1(mesh, alpha);
    if (phi.size() != mesh.n_vertices() || alpha.size() != mesh.n_edges())
        throw InputError("momentum_relation_residual: expected a 0-cochain and a 1-cochain");
    // One accumulator for both pairings, so their cancellation is not rounded twice.
    ProductSum acc;
    accumulate_cup(acc, mesh, action, alpha);
    accumulate_kappa(acc, mesh, dj, phi);
    return std::abs(acc.value());
}

// ---------------------------------------------------------------------------
// Hodge theory

namespace {

/// LDLT of a connected graph Laplacian with the first unknown pinned to 0.
class PinnedLaplacian
{
  public:
    explicit PinnedLaplacian(const SpMat& lap) : n_(lap.rows())
    {
        SpMat reduced = lap.bottomRightCorner(n_ - 1, n_ - 1);
        solver_.compute(reduced);
        if (solver_.info() != Eigen::Success)
            throw NumericalError("Hodge Laplacian factorization failed");
    }

    Vec solve(const Vec& rhs) const
    {
        Vec x = Vec::Zero(n_);
        if (n_ > 1)
            x.tail(n_ - 1) = solver_.solve(rhs.tail(n_ - 1));
        return x;
    }

  private:
    Eigen::Index n_;
    Eigen::SimplicialLDLT<SpMat> solver_;
};

}  // namespace

struct HodgeSolver::Impl
{
    PinnedLaplacian l0;
    PinnedLaplacian l2;
    Impl(const SpMat& a, const SpMat& b) : l0(a), l2(b) {}
};

HodgeSolver::HodgeSolver(const SurfaceMesh& mesh) : mesh_(mesh)
{
    SpMat l0 = mesh.boundary1() * SpMat(mesh.boundary1().transpose());
    SpMat l2 = SpMat(mesh.boundary2().transpose()) * mesh.boundary2();
    impl_ = std::make_unique<Impl>(l0, l2);
}

HodgeSolver::~HodgeSolver() = default;

HodgeSplit HodgeSolver::split(const Vec& alpha) const
{
    if (alpha.size() != mesh_.n_edges())
        throw InputError("hodge_split: expected a 1-cochain");
    HodgeSplit out;
    // Exact part d0 a with B1 B1^T a = B1 alpha; coexact part B2 b with B2^T B2 b = B2^T alpha.
    Vec a = impl_->l0.solve(mesh_.boundary1() * alpha);
    out.exact = mesh_.boundary1().transpose() * a;
    Vec b = impl_->l2.solve(mesh_.boundary2().transpose() * alpha);
    out.coexact = mesh_.boundary2() * b;
    out.harmonic = alpha - out.exact - out.coexact;
    const double scale = std::max(alpha.squaredNorm(), 1e-300);
    out.orthogonality = std::max({std::abs(out.exact.dot(out.coexact)), std::abs(out.exact.dot(out.harmonic)),
                                  std::abs(out.coexact.dot(out.harmonic))}) /
                        scale;
    return out;
}

Mat HodgeSolver::harmonic_part(const Mat& cochains) const
{
    Mat out(cochains.rows(), cochains.cols());
    for (Eigen::Index c = 0; c < cochains.cols(); ++c)
        out.col(c) = split(cochains.col(c)).harmonic;
    return out;
}

HodgeSplit hodge_split(const SurfaceMesh& mesh, const Vec& alpha)
{
    HodgeSolver solver(mesh);
    return solver.split(alpha);
}

Eigen::Index harmonic_dimension(const HodgeSolver& hodge)
{
    const SurfaceMesh& mesh = hodge.mesh();
    Rng rng(0x4a2d);
    Eigen::Index probes = std::min<Eigen::Index>(mesh.n_edges(), 2 * mesh.genus() + 4);
    Mat h = hodge.harmonic_part(random_normal(rng, mesh.n_edges(), probes));
    return numerical_rank(h, 1e-8);
}

// ---------------------------------------------------------------------------
// Homology and moduli

CycleBasis homology_cycle_basis(const SurfaceMesh& mesh, const HodgeSolver& hodge)
{
    const Eigen::Index nv = mesh.n_vertices(), ne = mesh.n_edges(), nf = mesh.n_faces();
    std::vector<std::vector<std::pair<Eigen::Index, Eigen::Index>>> adj(static_cast<std::size_t>(nv));
    for (Eigen::Index e = 0; e < ne; ++e)
    {
        const auto& ed = mesh.edges()[static_cast<std::size_t>(e)];
        adj[static_cast<std::size_t>(ed[0])].push_back({ed[1], e});
        adj[static_cast<std::size_t>(ed[1])].push_back({ed[0], e});
    }
    // Primal BFS tree; parent_sign is the coefficient of the parent edge when walking v -> parent.
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(nv), -1), parent_edge(static_cast<std::size_t>(nv), -1);
    std::vector<int> parent_sign(static_cast<std::size_t>(nv), 0);
    std::vector<bool> in_tree(static_cast<std::size_t>(ne), false);
    {
        std::vector<bool> seen(static_cast<std::size_t>(nv), false);
        std::queue<Eigen::Index> q;
        q.push(0);
        seen[0] = true;
        while (!q.empty())
        {
            Eigen::Index v = q.front();
            q.pop();
            for (auto [w, e] : adj[static_cast<std::size_t>(v)])
                if (!seen[static_cast<std::size_t>(w)])
                {
                    seen[static_cast<std::size_t>(w)] = true;
                    parent[static_cast<std::size_t>(w)] = v;
                    parent_edge[static_cast<std::size_t>(w)] = e;
                    // Edge (a, b), a < b, is traversed positively from a to b.
                    parent_sign[static_cast<std::size_t>(w)] = w < v ? 1 : -1;
                    in_tree[static_cast<std::size_t>(e)] = true;
                    q.push(w);
                }
        }
    }
    // Dual BFS tree over faces through non-tree edges.
    std::vector<std::vector<Eigen::Index>> edge_faces(static_cast<std::size_t>(ne));
    for (Eigen::Index f = 0; f < nf; ++f)
        for (SpMat::InnerIterator it(mesh.boundary2(), f); it; ++it)
            edge_faces[static_cast<std::size_t>(it.row())].push_back(f);
    std::vector<std::vector<std::pair<Eigen::Index, Eigen::Index>>> fadj(static_cast<std::size_t>(nf));
    for (Eigen::Index e = 0; e < ne; ++e)
        if (!in_tree[static_cast<std::size_t>(e)])
        {
            const auto& fs = edge_faces[static_cast<std::size_t>(e)];
            fadj[static_cast<std::size_t>(fs[0])].push_back({fs[1], e});
            fadj[static_cast<std::size_t>(fs[1])].push_back({fs[0], e});
        }
    std::vector<bool> in_cotree(static_cast<std::size_t>(ne), false);
    {
        std::vector<bool> seen(static_cast<std::size_t>(nf), false);
        std::queue<Eigen::Index> q;
        q.push(0);
        seen[0] = true;
        while (!q.empty())
        {
            Eigen::Index f = q.front();
            q.pop();
            for (auto [h, e] : fadj[static_cast<std::size_t>(f)])
                if (!seen[static_cast<std::size_t>(h)])
                {
                    seen[static_cast<std::size_t>(h)] = true;
                    in_cotree[static_cast<std::size_t>(e)] = true;
                    q.push(h);
                }
        }
    }
    std::vector<Eigen::Index> generators;
    for (Eigen::Index e = 0; e < ne; ++e)
        if (!in_tree[static_cast<std::size_t>(e)] && !in_cotree[static_cast<std::size_t>(e)])
            generators.push_back(e);
    const Eigen::Index b1 = 2 * mesh.genus();
    if (static_cast<Eigen::Index>(generators.size()) != b1)
        throw NumericalError("homology_cycle_basis: tree/cotree left an unexpected number of edges");

    CycleBasis out;
    out.cycles = Mat::Zero(ne, b1);
    auto walk_to_root = [&](Eigen::Index v, double sign, Eigen::Index col) {
        while (parent[static_cast<std::size_t>(v)] >= 0)
        {
            out.cycles(parent_edge[static_cast<std::size_t>(v)], col) += sign * parent_sign[static_cast<std::size_t>(v)];
            v = parent[static_cast<std::size_t>(v)];
        }
    };
    for (Eigen::Index i = 0; i < b1; ++i)
    {
        Eigen::Index e = generators[static_cast<std::size_t>(i)];
        const auto& ed = mesh.edges()[static_cast<std::size_t>(e)];
        out.cycles(e, i) += 1.0;             // a -> b
        walk_to_root(ed[1], 1.0, i);         // b -> root
        walk_to_root(ed[0], -1.0, i);        // root -> a
    }

    Mat h = hodge.harmonic_part(out.cycles);
    Mat pairing = h.transpose() * out.cycles;  // (k, j) = <h_k, cycle_j>
    out.dual_harmonic = h * pairing.transpose().fullPivLu().solve(Mat::Identity(b1, b1));

    Mat form(b1, b1);
    for (Eigen::Index i = 0; i < b1; ++i)
        for (Eigen::Index j = 0; j < b1; ++j)
            form(i, j) = wedge_form(mesh, out.dual_harmonic.col(i), out.dual_harmonic.col(j));
    out.intersection = form.array().round().matrix();
    out.rounding_residual = (form - out.intersection).cwiseAbs().maxCoeff();
    if (out.rounding_residual > 0.1)
        throw NumericalError("homology_cycle_basis: intersection numbers are not integral");
    return out;
}

Vec wilson_flat_moduli(const SurfaceMesh& mesh, const Vec& theta, const CycleBasis& cycles)
{
    CurvatureResult c = curvature_and_chern(mesh, theta);
    const double flat = c.curvature.size() ? c.curvature.cwiseAbs().maxCoeff() : 0.0;
    if (flat > 1e-8)
        throw InputError("wilson_flat_moduli: connection is not flat (max face curvature " + std::to_string(flat) +
                         ")");
    Vec hol = cycles.cycles.transpose() * theta;
    for (Eigen::Index i = 0; i < hol.size(); ++i)
        hol(i) = wrap_angle(hol(i));
    return hol;
}

Vec harmonic_connection(const CycleBasis& cycles, const Vec& target)
{
    if (target.size() != cycles.dual_harmonic.cols())
        throw InputError("harmonic_connection: expected 2g target angles");
    return cycles.dual_harmonic * target;
}

bool ReducedIntersection::pass() const
{
    return antisymmetry <= 1e-10 && min_singular > 1e-8 && integrality <= 1e-6 && std::abs(determinant) == 1.0 &&
           darboux_residual <= 1e-10 && exact_pairing <= 1e-10;
}

ReducedIntersection reduced_intersection_check(const SurfaceMesh& mesh, const CycleBasis& cycles, Rng& rng)
{
    ReducedIntersection out;
    const Mat& h = cycles.dual_harmonic;
    const Eigen::Index b1 = h.cols();
    out.form.resize(b1, b1);
    for (Eigen::Index i = 0; i < b1; ++i)
        for (Eigen::Index j = 0; j < b1; ++j)
            out.form(i, j) = wedge_form(mesh, h.col(i), h.col(j));
    out.antisymmetry = (out.form + out.form.transpose()).cwiseAbs().maxCoeff();
    out.min_singular = min_singular_value(out.form);
    out.integrality = (out.form - cycles.intersection).cwiseAbs().maxCoeff();
    out.determinant = std::round(cycles.intersection.determinant());
    if (out.min_singular > 1e-8)
    {
        Mat w = 0.5 * (out.form - out.form.transpose());
        SymplecticSpace sp(w);
        Mat s = darboux_basis(sp);
        out.darboux_residual = (s.transpose() * w * s - standard_omega(b1 / 2)).cwiseAbs().maxCoeff();
    }
    else
    {
        out.darboux_residual = INFINITY;
    }
    for (int t = 0; t < 8; ++t)
    {
        Vec dphi = coboundary0(mesh, random_normal(rng, mesh.n_vertices()));
        for (Eigen::Index i = 0; i < b1; ++i)
            out.exact_pairing = std::max(out.exact_pairing, std::abs(wedge_form(mesh, h.col(i), dphi)));
    }
    return out;
}

Vec central_ym_connection(const SurfaceMesh& mesh, long long c)
{
    const Eigen::Index nf = mesh.n_faces();
    if (2 * std::llabs(c) >= nf)
        throw InputError("central_ym_connection: |c| too large for the mesh");
    // Plaquette sums s = 2 pi c / F - 2 pi c e_0 sum to zero and wrap back to the uniform curvature.
    Vec s = Vec::Constant(nf, kTwoPi * static_cast<double>(c) / static_cast<double>(nf));
    s(0) -= kTwoPi * static_cast<double>(c);
    SpMat l2 = SpMat(mesh.boundary2().transpose()) * mesh.boundary2();
    PinnedLaplacian solver(l2);
    return mesh.boundary2() * solver.solve(s);
}

}  // namespace momenta
