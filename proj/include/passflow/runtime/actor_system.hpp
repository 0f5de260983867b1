#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "passflow/error.hpp"
#include "passflow/runtime/message.hpp"
#include "passflow/runtime/trace.hpp"

namespace passflow::runtime {

inline constexpr std::string_view kManagementSystem = "management";
inline constexpr std::string_view kServerSystem = "server";

class ActorSystem;

class Actor {
 public:
  virtual ~Actor() = default;

  const ActorAddress& address() const { return address_; }
  /// Empty for infrastructure actors (director, IO actor).
  const std::string& instance_id() const { return instance_; }
  virtual std::string subject() const { return {}; }

  virtual void receive(const EngineMessage& message) = 0;

 protected:
  ActorSystem& system() { return *system_; }
  const ActorSystem& system() const { return *system_; }
  void send(const ActorAddress& to, EngineMessage message);
  void trace(std::string event, nlohmann::ordered_json detail = nlohmann::ordered_json::object());

 private:
  friend class ActorSystem;
  ActorSystem* system_ = nullptr;
  ActorAddress address_;
  std::string instance_;
};

/// How the next message is picked when several channels hold one.
/// Seeded draws a channel uniformly from a seeded generator; Fifo delivers
/// in global post order.
enum class SchedulePolicy { Seeded, Fifo };

/// Single-threaded message bus hosting every named actor system. Each
/// (sender, recipient) pair is a FIFO channel; the policy orders channels
/// against each other. Timers run on a virtual clock that only moves when
/// advance_to is called.
class ActorSystem {
 public:
  explicit ActorSystem(SchedulePolicy policy = SchedulePolicy::Seeded, std::uint64_t seed = 0);
  ActorSystem(const ActorSystem&) = delete;
  ActorSystem& operator=(const ActorSystem&) = delete;

  void add_system(const std::string& name) { systems_.insert(name); }
  bool has_system(const std::string& name) const { return systems_.contains(name); }

  /// Throws Error{PlacementError} for an unknown system.
  template <typename T, typename... Args>
  T& spawn(const std::string& systemName, const std::string& instanceId, Args&&... args) {
    check_placement(systemName);
    auto actor = std::make_unique<T>(std::forward<Args>(args)...);
    T& ref = *actor;
    adopt(std::move(actor), systemName, instanceId);
    return ref;
  }

  /// Queues `message` from message.sender to `to`.
  void post(const ActorAddress& to, EngineMessage message);
  /// Delivers `message` to `to` once the clock reaches now() + delayMs.
  void schedule(const ActorAddress& to, std::int64_t delayMs, EngineMessage message);
  /// Removes an actor. Later process messages addressed to it go to
  /// `forwardTo` when given, otherwise they are dropped and traced.
  void stop(const ActorAddress& address, std::optional<ActorAddress> forwardTo = std::nullopt);

  bool alive(const ActorAddress& address) const { return actors_.contains(address.id); }
  Actor* find(const ActorAddress& address);
  template <typename T>
  T* find_as(const ActorAddress& address) {
    return dynamic_cast<T*>(find(address));
  }
  std::vector<ActorAddress> live_actors(const std::string& instanceId) const;

  /// Delivers one message. False when no message is queued.
  bool step();
  /// Throws Error{Stalled} after `limit` deliveries without going idle.
  std::size_t run_until_idle(std::size_t limit = 1'000'000);
  bool idle() const { return queued_ == 0; }

  std::int64_t now() const { return now_; }
  std::optional<std::int64_t> next_timer_due() const;
  /// Moves the clock forward, queueing every timer due at or before `t`.
  void advance_to(std::int64_t t);

  /// Sees every message just before it is delivered.
  using Observer = std::function<void(const ActorAddress& to, const EngineMessage&)>;
  void set_observer(Observer observer) { observer_ = std::move(observer); }

  TraceLog& trace_log() { return trace_; }
  void trace(const Actor* actor, std::string instance, std::string subject, std::string event,
             nlohmann::ordered_json detail);

 private:
  struct Queued {
    std::uint64_t seq;
    ActorAddress to;
    EngineMessage message;
  };
  struct Timer {
    std::int64_t due;
    std::uint64_t seq;
    ActorAddress to;
    EngineMessage message;
    bool operator>(const Timer& other) const { return std::pair(due, seq) > std::pair(other.due, other.seq); }
  };
  using ChannelKey = std::pair<std::uint64_t, std::uint64_t>;

  void check_placement(const std::string& systemName) const;
  void adopt(std::unique_ptr<Actor> actor, const std::string& systemName, const std::string& instanceId);
  void dispatch(Queued item);

  SchedulePolicy policy_;
  Observer observer_;
  std::mt19937_64 rng_;
  std::set<std::string> systems_;
  std::map<std::uint64_t, std::unique_ptr<Actor>> actors_;
  std::map<std::uint64_t, ActorAddress> tombstones_;
  std::vector<std::unique_ptr<Actor>> graveyard_;
  std::map<ChannelKey, std::deque<Queued>> channels_;
  std::priority_queue<Timer, std::vector<Timer>, std::greater<>> timers_;
  std::size_t queued_ = 0;
  std::uint64_t next_id_ = 1;
  std::uint64_t next_seq_ = 0;
  std::int64_t now_ = 0;
  TraceLog trace_;
};

}  // namespace passflow::runtime
