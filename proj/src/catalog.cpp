#include "contactlab/catalog.hpp"

#include "contactlab/error.hpp"

namespace contactlab::immersion {

namespace {

Vector unit(int k, int i) { return Vector::Unit(k, i); }

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

CatalogEntry example1() {
  auto im = Immersion::from_strings({"u", "v", "w", "t", "z"},
                                    {"u+v", "-u+v", "t*cos(w)", "t*sin(w)", "w*cos(t)", "w*sin(t)", "z"},
                                    {{-1, 1}, {-1, 1}, {0.5, 1.5}, {1.5, 2.5}, {-1, 1}}, {"w-t"});
  DomainSplit split{{unit(5, 0), unit(5, 1)}, {unit(5, 2), unit(5, 3)}, unit(5, 4)};
  return {"example1",
          "pointwise semi-slant 5-fold in R^7 with the flat almost contact structure; theta depends on (w,t)",
          ambient::make_euclidean_acm(3), std::move(im), split, std::nullopt};
}

CatalogEntry invariant_r5() {
  auto im = Immersion::from_strings({"u", "v", "s"}, {"u", "v", "u^2 - v^2", "2*u*v", "s"},
                                    {{-1, 1}, {-1, 1}, {-1, 1}});
  DomainSplit split{{unit(3, 0), unit(3, 1)}, {}, unit(3, 2)};
  return {"invariant_r5", "invariant 3-fold (holomorphic graph times the Reeb line) in standard Sasakian R^5",
          ambient::make_standard_sasakian(2), std::move(im), split, std::nullopt};
}

CatalogEntry cr_warped_r7() {
  auto im = Immersion::from_strings(
      {"u1", "u2", "s", "t1", "t2"},
      {"u1*cos(t1)*cos(t2)", "u2*cos(t1)*cos(t2)", "u1*cos(t1)*sin(t2)", "u2*cos(t1)*sin(t2)", "u1*sin(t1)",
       "u2*sin(t1)", "s"},
      {{0.5, 1.5}, {-1, 1}, {-1, 1}, {-1, 1}, {-1.5, 1.5}});
  DomainSplit split{{unit(5, 0), unit(5, 1)}, {unit(5, 3), unit(5, 4)}, unit(5, 2)};
  WarpDeclaration warp{{0, 1, 2}, {3, 4}, vec({1, 0, 0})};
  return {"cr_warped_r7", "contact CR warped product (base: complex line x Reeb, fiber: sphere patch, f ~ |u|) in standard Sasakian R^7",
          ambient::make_standard_sasakian(3), std::move(im), split, warp};
}

CatalogEntry cr_product_r7() {
  auto im = Immersion::from_strings({"u1", "u2", "s", "p", "q"},
                                    {"u1", "u2", "cos(p)", "sin(p)", "q", "0", "s - 0.5*p + 0.25*sin(2*p)"},
                                    {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}});
  DomainSplit split{{unit(5, 0), unit(5, 1)}, {unit(5, 3), unit(5, 4)}, unit(5, 2)};
  WarpDeclaration warp{{0, 1, 2}, {3, 4}, vec({0, 0, 0})};
  return {"cr_product_r7", "trivial (f constant) contact CR product in standard Sasakian R^7",
          ambient::make_standard_sasakian(3), std::move(im), split, warp};
}

CatalogEntry warp_surface_r5() {
  auto im = Immersion::from_strings({"u", "v", "z"}, {"exp(u)*cos(v)", "exp(u)*sin(v)", "u", "0", "z"},
                                    {{-1, 1}, {-1.5, 1.5}, {-1, 1}});
  DomainSplit split{{}, {unit(3, 0), unit(3, 1)}, unit(3, 2)};
  WarpDeclaration warp{{0, 2}, {1}, vec({0, 0})};
  return {"warp_surface_r5", "warped metric with planted f = exp(u) (base u,z; fiber v) in flat R^5",
          ambient::make_euclidean_acm(2), std::move(im), split, warp};
}

struct Builder {
  const char* name;
  CatalogEntry (*make)();
};

constexpr Builder kEntries[] = {
    {"example1", example1},         {"invariant_r5", invariant_r5},   {"cr_warped_r7", cr_warped_r7},
    {"cr_product_r7", cr_product_r7}, {"warp_surface_r5", warp_surface_r5},
};

}  // namespace

std::vector<CatalogInfo> catalog_list(const std::string& filter) {
  std::vector<CatalogInfo> out;
  for (const auto& b : kEntries) {
    CatalogEntry e = b.make();
    if (filter.empty() || e.name.find(filter) != std::string::npos ||
        e.description.find(filter) != std::string::npos) {
      out.push_back({e.name, e.description});
    }
  }
  return out;
}

CatalogEntry catalog(const std::string& name) {
  for (const auto& b : kEntries) {
    if (name == b.name) return b.make();
  }
  throw GeometryError("unknown catalog entry '" + name + "'");
}

}  // namespace contactlab::immersion
