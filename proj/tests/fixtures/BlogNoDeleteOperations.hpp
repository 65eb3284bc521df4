#pragma once

// Blog policy that forbids every delete operation.

#include "models/Blog.hpp"
#include "spicey/auth.hpp"

namespace blog {

inline spicey::AccessResult entryOperationAllowed(const spicey::AccessType<Entry>& at) {
  return spicey::disallowDelete(at);
}

inline spicey::AccessResult commentOperationAllowed(const spicey::AccessType<Comment>& at) {
  return spicey::disallowDelete(at);
}

inline spicey::AccessResult tagOperationAllowed(const spicey::AccessType<Tag>& at) {
  return spicey::disallowDelete(at);
}

}  // namespace blog
