#pragma once

#include <optional>
#include <string>
#include <vector>

#include "contactlab/ambient.hpp"
#include "contactlab/immersion.hpp"

namespace contactlab::immersion {

/// Distribution split given as vectors in domain coordinates.
struct DomainSplit {
  VectorList D;
  VectorList Dtheta;
  std::optional<Vector> xi;  // defaults to the pulled-back structure vector
};

/// Declared warped-product structure: which domain variables span the base
/// and which the fiber, plus the base point where f is normalized to 1.
struct WarpDeclaration {
  std::vector<int> base_vars;
  std::vector<int> fiber_vars;
  Vector reference_point;  // values of the base variables, in base_vars order
};

struct CatalogEntry {
  std::string name;
  std::string description;
  ambient::AmbientStructure ambient;
  Immersion immersion;
  std::optional<DomainSplit> split;
  std::optional<WarpDeclaration> warp;
};

struct CatalogInfo {
  std::string name;
  std::string description;
};

/// Names and one-line descriptions in a fixed order. Entries whose name or
/// description contains `filter` are returned; an empty filter keeps all.
std::vector<CatalogInfo> catalog_list(const std::string& filter = "");

/// Throws GeometryError for an unknown name.
CatalogEntry catalog(const std::string& name);

}  // namespace contactlab::immersion
