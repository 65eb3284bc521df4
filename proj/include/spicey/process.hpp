#pragma once

// User processes: a state machine over controllers. The active state lives
// in a session slot; controllers hand control to the next state through
// nextInProcessOr.

#include <charconv>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "context.hpp"

namespace spicey {

template <class ST, class Ref>
struct Processes {
  std::vector<std::pair<std::string, ST>> startStates;
  // nullopt: no controller for this state.
  std::function<std::optional<Ref>(const ST&)> controllerOf;
  // nullopt: the process terminates.
  std::function<std::optional<ST>(const ST&, const std::optional<ControllerResult>&)> next;
  // Session representation; integral states get a default.
  std::function<std::string(const ST&)> encode;
  std::function<std::optional<ST>(std::string_view)> decode;
  // States after whose controller the process ends. Default: states without
  // a successor for an absent result.
  std::function<bool(const ST&)> isFinal;
};

inline const SessionSlot<std::string> activeProcess{"activeProcess"};

inline constexpr std::string_view kProcessRoute = "processes";

template <class ST, class Ref>
class ProcessEngine {
 public:
  using Resolve = std::function<Controller(const Ref&)>;

  ProcessEngine(Processes<ST, Ref> spec, Resolve resolve)
      : spec_(std::move(spec)), resolve_(std::move(resolve)) {
    if constexpr (std::is_integral_v<ST>) {
      if (!spec_.encode) spec_.encode = [](const ST& s) { return std::to_string(s); };
      if (!spec_.decode)
        spec_.decode = [](std::string_view t) -> std::optional<ST> {
          ST v{};
          auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
          if (ec != std::errc{} || p != t.data() + t.size()) return std::nullopt;
          return v;
        };
    }
    if (!spec_.encode || !spec_.decode) throw std::invalid_argument("process states need encode/decode");
    if (!spec_.isFinal) {
      auto next = spec_.next;
      spec_.isFinal = [next](const ST& s) { return !next(s, std::nullopt).has_value(); };
    }
  }

  const Processes<ST, Ref>& spec() const { return spec_; }

  std::optional<ST> current() const {
    auto stored = getSessionData(activeProcess);
    if (!stored) return std::nullopt;
    return spec_.decode(*stored);
  }

  // Stores `s` and runs its controller; a final state ends the process.
  HtmlPage enter(const ST& s) const {
    auto ref = spec_.controllerOf(s);
    if (!ref) {
      removeSessionData(activeProcess);
      return displayErrorPage("process state has no controller");
    }
    putSessionData(spec_.encode(s), activeProcess);
    HtmlPage page = resolve_(*ref)();
    if (spec_.isFinal(s)) removeSessionData(activeProcess);
    return page;
  }

  // nullopt when no process is active or the process just terminated.
  std::optional<Controller> advance(const std::optional<ControllerResult>& result) const {
    if (!getSessionData(activeProcess)) return std::nullopt;
    auto s = current();
    std::optional<ST> n = s ? spec_.next(*s, result) : std::nullopt;
    if (!n) {
      removeSessionData(activeProcess);
      return std::nullopt;
    }
    return Controller([this, st = *n] { return enter(st); });
  }

  Controller start(std::size_t index) const {
    return [this, index] {
      if (index >= spec_.startStates.size()) return displayErrorPage("no such process");
      return enter(spec_.startStates[index].second);
    };
  }

  // The process menu; also serves /processes/start/<index>.
  Controller menu() const {
    return [this] {
      auto params = getControllerParams();
      if (params.size() == 2 && params[0] == "start") {
        std::size_t i = 0;
        auto [p, ec] = std::from_chars(params[1].data(), params[1].data() + params[1].size(), i);
        if (ec != std::errc{} || p != params[1].data() + params[1].size()) return displayErrorPage("no such process");
        return start(i)();
      }
      HtmlPage page{h1({htxt("Processes")})};
      if (spec_.startStates.empty()) {
        page.push_back(par({htxt("No processes defined.")}));
        return page;
      }
      std::vector<std::vector<HtmlExp>> items;
      for (std::size_t i = 0; i < spec_.startStates.size(); ++i)
        items.push_back({href("/" + std::string(kProcessRoute) + "/start/" + std::to_string(i),
                              {htxt(spec_.startStates[i].first)})});
      page.push_back(ulist(std::move(items)));
      return page;
    };
  }

  // Installs this engine as the request's process hook.
  void install(RequestContext& ctx) const {
    ctx.advanceProcess = [this](const std::optional<ControllerResult>& r) { return advance(r); };
  }

 private:
  Processes<ST, Ref> spec_;
  Resolve resolve_;
};

// Continues the active process, or runs `dflt` when none is active.
inline Controller nextInProcessOr(Controller dflt, std::optional<ControllerResult> result = std::nullopt) {
  return [dflt = std::move(dflt), result = std::move(result)] {
    if (inRequest() && currentRequest().advanceProcess)
      if (auto c = currentRequest().advanceProcess(result)) return (*c)();
    return dflt();
  };
}

}  // namespace spicey
