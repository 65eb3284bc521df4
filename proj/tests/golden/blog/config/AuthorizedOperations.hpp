#pragma once

// Authorization policy per entity. Every operation is granted by default;
// return spicey::AccessResult::denied(reason) to forbid one.

#include "models/Blog.hpp"
#include "spicey/auth.hpp"

namespace blog {

inline spicey::AccessResult entryOperationAllowed(const spicey::AccessType<Entry>&) {
  return spicey::AccessResult::granted();
}

inline spicey::AccessResult commentOperationAllowed(const spicey::AccessType<Comment>&) {
  return spicey::AccessResult::granted();
}

inline spicey::AccessResult tagOperationAllowed(const spicey::AccessType<Tag>&) {
  return spicey::AccessResult::granted();
}

}  // namespace blog
