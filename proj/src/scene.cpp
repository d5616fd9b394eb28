#include "tomo/scene.hpp"

#include <cmath>
#include <sstream>

namespace tomo {

void Scene::validate(const ArrayGeometry& geometry) const {
  if (extent_m <= 0.0) throw std::invalid_argument("scene: extent_m must be positive");
  if (!(extent_m < geometry.unambiguous_window_m())) {
    std::ostringstream msg;
    msg << "scene: extent " << extent_m << " m must stay below the unambiguous window "
        << geometry.unambiguous_window_m() << " m";
    throw std::invalid_argument(msg.str());
  }
  const int l = snapshots();
  for (std::size_t k = 0; k < scatterers.size(); ++k) {
    if (!(std::abs(scatterers[k].elevation_m) < extent_m / 2.0))
      throw std::invalid_argument("scene: scatterer elevation outside extent");
    if (scatterers[k].amplitudes.size() != l)
      throw std::invalid_argument("scene: inconsistent snapshot counts across scatterers");
    for (std::size_t j = 0; j < k; ++j) {
      if (scatterers[j].elevation_m == scatterers[k].elevation_m)
        throw std::invalid_argument("scene: scatterer elevations must be pairwise distinct");
    }
  }
}

Scene make_random_phase_scene(const std::vector<double>& elevations_m, double amplitude,
                              int snapshots, double extent_m, RngStream& rng) {
  Scene scene;
  scene.extent_m = extent_m;
  scene.scatterers.reserve(elevations_m.size());
  for (double s : elevations_m) {
    Scatterer sc;
    sc.elevation_m = s;
    sc.amplitudes = CVec(snapshots);
    for (int l = 0; l < snapshots; ++l) sc.amplitudes(l) = amplitude * rng.random_phase();
    scene.scatterers.push_back(std::move(sc));
  }
  return scene;
}

}  // namespace tomo
