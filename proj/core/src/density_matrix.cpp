#include "harvest/density_matrix.hpp"

namespace harvest {

std::string DensityMatrix::basis_label() const {
  if (dim == 8) return "|detA> x |detB> x |control>, index 4a+2b+c";
  if (dim == 4) return "|detA> x |detB>, index 2a+b";
  return "dim " + std::to_string(dim);
}

}  // namespace harvest
