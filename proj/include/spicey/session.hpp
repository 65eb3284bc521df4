#pragma once

// In-memory session state: typed named slots keyed by session id, with an
// inactivity horizon, and the per-session registry of form handlers.

#include <any>
#include <chrono>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>

#include "html.hpp"
#include "random.hpp"

namespace spicey {

using ClockTime = std::chrono::system_clock::time_point;
using Clock = std::function<ClockTime()>;

inline Clock systemClock() {
  return [] { return std::chrono::system_clock::now(); };
}

class SessionId {
 public:
  static SessionId fresh() { return SessionId(randomToken()); }
  // Accepts exactly 32 lowercase hex digits.
  static std::optional<SessionId> parse(std::string_view s) {
    if (!isToken(s)) return std::nullopt;
    return SessionId(std::string(s));
  }
  const std::string& str() const { return hex_; }
  auto operator<=>(const SessionId&) const = default;

 private:
  explicit SessionId(std::string hex) : hex_(std::move(hex)) {}
  std::string hex_;
};

// Names a slot of session data holding values of type T.
template <class T>
struct SessionSlot {
  std::string name;
};

inline constexpr std::chrono::minutes kDefaultSessionHorizon{60};

class SessionStore {
 public:
  explicit SessionStore(std::chrono::seconds horizon = kDefaultSessionHorizon,
                        Clock clock = systemClock())
      : horizon_(horizon), clock_(std::move(clock)) {}

  template <class T>
  std::optional<T> get(const SessionSlot<T>& slot, const SessionId& id) const {
    std::lock_guard lock(mu_);
    auto s = slots_.find(slot.name);
    if (s == slots_.end()) return std::nullopt;
    auto e = s->second.find(id);
    if (e == s->second.end() || expired(e->second.lastTouch, clock_())) return std::nullopt;
    return std::any_cast<T>(e->second.value);
  }

  template <class T>
  void put(const SessionSlot<T>& slot, const SessionId& id, T value) {
    std::lock_guard lock(mu_);
    slots_[slot.name][id] = Entry{clock_(), std::any(std::move(value))};
  }

  void remove(std::string_view slotName, const SessionId& id) {
    std::lock_guard lock(mu_);
    auto s = slots_.find(std::string(slotName));
    if (s != slots_.end()) s->second.erase(id);
  }
  template <class T>
  void remove(const SessionSlot<T>& slot, const SessionId& id) {
    remove(slot.name, id);
  }

  // Get and remove in one step.
  template <class T>
  std::optional<T> take(const SessionSlot<T>& slot, const SessionId& id) {
    std::lock_guard lock(mu_);
    auto s = slots_.find(slot.name);
    if (s == slots_.end()) return std::nullopt;
    auto e = s->second.find(id);
    if (e == s->second.end()) return std::nullopt;
    std::optional<T> out;
    if (!expired(e->second.lastTouch, clock_())) out = std::any_cast<T>(std::move(e->second.value));
    s->second.erase(e);
    return out;
  }

  // Marks all live entries of a session as active now.
  void touch(const SessionId& id) {
    std::lock_guard lock(mu_);
    ClockTime now = clock_();
    for (auto& [name, entries] : slots_) {
      auto e = entries.find(id);
      if (e != entries.end() && !expired(e->second.lastTouch, now)) e->second.lastTouch = now;
    }
  }

  std::size_t purgeExpired(ClockTime now) {
    std::lock_guard lock(mu_);
    std::size_t removed = 0;
    for (auto& [name, entries] : slots_) {
      for (auto it = entries.begin(); it != entries.end();) {
        if (expired(it->second.lastTouch, now)) {
          it = entries.erase(it);
          ++removed;
        } else {
          ++it;
        }
      }
    }
    return removed;
  }
  std::size_t purgeExpired() { return purgeExpired(clock_()); }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    std::size_t n = 0;
    for (const auto& [name, entries] : slots_) n += entries.size();
    return n;
  }

  std::chrono::seconds horizon() const { return horizon_; }
  ClockTime now() const { return clock_(); }

 private:
  struct Entry {
    ClockTime lastTouch;
    std::any value;
  };
  bool expired(ClockTime touched, ClockTime now) const { return now - touched > horizon_; }

  std::chrono::seconds horizon_;
  Clock clock_;
  mutable std::mutex mu_;
  std::map<std::string, std::map<SessionId, Entry>> slots_;
};

using HtmlPageHandler = std::function<HtmlPage(const FormEnv&)>;

inline constexpr std::size_t kHandlerCapacity = 100;

// Per-session FIFO table of form handlers. Tokens stay valid until evicted
// or until the session has been idle longer than the horizon.
class HandlerRegistry {
 public:
  explicit HandlerRegistry(std::size_t capacity = kHandlerCapacity,
                           std::chrono::seconds horizon = kDefaultSessionHorizon,
                           Clock clock = systemClock())
      : capacity_(capacity), horizon_(horizon), clock_(std::move(clock)) {}

  HandlerRef add(const SessionId& id, HtmlPageHandler handler,
                 HandlerRef::Kind kind = HandlerRef::Kind::SubmitButton) {
    HandlerRef ref{randomToken(), kind};
    std::lock_guard lock(mu_);
    auto& s = sessions_[id];
    s.lastUse = clock_();
    s.handlers.emplace_back(ref.token, std::move(handler));
    while (s.handlers.size() > capacity_) s.handlers.pop_front();
    return ref;
  }

  std::optional<HtmlPageHandler> find(const SessionId& id, std::string_view token) {
    std::lock_guard lock(mu_);
    auto s = sessions_.find(id);
    if (s == sessions_.end()) return std::nullopt;
    ClockTime now = clock_();
    if (now - s->second.lastUse > horizon_) {
      sessions_.erase(s);
      return std::nullopt;
    }
    for (const auto& [t, h] : s->second.handlers)
      if (t == token) {
        s->second.lastUse = now;
        return h;
      }
    return std::nullopt;
  }

  std::size_t size(const SessionId& id) const {
    std::lock_guard lock(mu_);
    auto s = sessions_.find(id);
    return s == sessions_.end() ? 0 : s->second.handlers.size();
  }

  std::size_t purgeExpired(ClockTime now) {
    std::lock_guard lock(mu_);
    std::size_t removed = 0;
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      if (now - it->second.lastUse > horizon_) {
        removed += it->second.handlers.size();
        it = sessions_.erase(it);
      } else {
        ++it;
      }
    }
    return removed;
  }

  std::size_t purgeExpired() { return purgeExpired(clock_()); }

 private:
  struct PerSession {
    ClockTime lastUse;
    std::deque<std::pair<std::string, HtmlPageHandler>> handlers;
  };
  std::size_t capacity_;
  std::chrono::seconds horizon_;
  Clock clock_;
  mutable std::mutex mu_;
  std::map<SessionId, PerSession> sessions_;
};

inline const SessionSlot<std::string> pageMessage{"pageMessage"};

}  // namespace spicey
