#include <cstdlib>
#include <cstring>
#include <string>

#include "tqe/kernels/api.hpp"

namespace tqe::kernels {

namespace {

const Ops* select() {
  const char* env = std::getenv("TORUSQE_KERNEL");
  std::string want = env ? env : "auto";
  if (want == "scalar") return &scalar_ops();
#if defined(TQE_HAVE_AVX2_TU)
  if (want == "avx2") return avx2_supported() ? &avx2_ops() : &scalar_ops();
#endif
#if defined(TQE_HAVE_NEON_TU)
  if (want == "neon") return &neon_ops();
#endif
  // auto (or unrecognized): widest supported
#if defined(TQE_HAVE_AVX2_TU)
  if (avx2_supported()) return &avx2_ops();
#endif
#if defined(TQE_HAVE_NEON_TU)
  return &neon_ops();
#endif
  return &scalar_ops();
}

}  // namespace

const Ops& active_ops() {
  static const Ops* chosen = select();
  return *chosen;
}

std::vector<const Ops*> available_ops() {
  std::vector<const Ops*> all;
  all.push_back(&scalar_ops());
#if defined(TQE_HAVE_AVX2_TU)
  if (avx2_supported()) all.push_back(&avx2_ops());
#endif
#if defined(TQE_HAVE_NEON_TU)
  all.push_back(&neon_ops());
#endif
  return all;
}

}  // namespace tqe::kernels
