#pragma once

#include <string>
#include <string_view>

#include "wulffcurv/anisotropy.hpp"
#include "wulffcurv/geometry.hpp"

namespace wulffcurv {

/// `const:c=1[,n=2]`, `linear:a=[0.3,0,0]`, `norm:B=[2,1,1]`, `quad:c=0.2,d=[0,0,1]`.
/// `default_dimension` applies to `const` when no `n` is given.
AnisotropyModel parse_anisotropy(std::string_view text, int default_dimension = 2);

/// `sphere:R=1[,n=1]`, `ellipsoid:a=1,b=1,c=2` (two axes give a curve),
/// `wulff:F=<anisotropy>`, `radial:eps=[..],poly=[..][,n=2]`, each optionally
/// followed by `*scale=s` and `*translate=[..]` modifiers applied left to right.
ParametricSurface parse_surface(std::string_view text);

}  // namespace wulffcurv
