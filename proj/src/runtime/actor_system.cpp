#include "passflow/runtime/actor_system.hpp"

namespace passflow::runtime {

void Actor::send(const ActorAddress& to, EngineMessage message) {
  message.sender = address_;
  system_->post(to, std::move(message));
}

void Actor::trace(std::string event, nlohmann::ordered_json detail) {
  system_->trace(this, instance_, subject(), std::move(event), std::move(detail));
}

ActorSystem::ActorSystem(SchedulePolicy policy, std::uint64_t seed) : policy_(policy), rng_(seed) {
  systems_.insert(std::string(kManagementSystem));
  systems_.insert(std::string(kServerSystem));
}

void ActorSystem::check_placement(const std::string& systemName) const {
  if (!systems_.contains(systemName)) {
    throw Error(Errc::PlacementError, "no actor system named '" + systemName + "'", {systemName});
  }
}

void ActorSystem::adopt(std::unique_ptr<Actor> actor, const std::string& systemName,
                        const std::string& instanceId) {
  actor->system_ = this;
  actor->address_ = {next_id_++, systemName};
  actor->instance_ = instanceId;
  actors_.emplace(actor->address_.id, std::move(actor));
}

void ActorSystem::post(const ActorAddress& to, EngineMessage message) {
  ChannelKey key{message.sender.id, to.id};
  channels_[key].push_back({next_seq_++, to, std::move(message)});
  ++queued_;
}

void ActorSystem::schedule(const ActorAddress& to, std::int64_t delayMs, EngineMessage message) {
  timers_.push({now_ + std::max<std::int64_t>(delayMs, 0), next_seq_++, to, std::move(message)});
}

void ActorSystem::stop(const ActorAddress& address, std::optional<ActorAddress> forwardTo) {
  auto it = actors_.find(address.id);
  if (it == actors_.end()) return;
  if (forwardTo) tombstones_[address.id] = *forwardTo;
  // An actor usually stops itself from inside receive(); keep it alive
  // until that call returns.
  graveyard_.push_back(std::move(it->second));
  actors_.erase(it);
}

Actor* ActorSystem::find(const ActorAddress& address) {
  auto it = actors_.find(address.id);
  return it == actors_.end() ? nullptr : it->second.get();
}

std::vector<ActorAddress> ActorSystem::live_actors(const std::string& instanceId) const {
  std::vector<ActorAddress> out;
  for (const auto& [id, actor] : actors_) {
    if (actor->instance_id() == instanceId) out.push_back(actor->address());
  }
  return out;
}

bool ActorSystem::step() {
  if (queued_ == 0) return false;
  auto pick = channels_.end();
  if (policy_ == SchedulePolicy::Fifo) {
    for (auto it = channels_.begin(); it != channels_.end(); ++it) {
      if (pick == channels_.end() || it->second.front().seq < pick->second.front().seq) pick = it;
    }
  } else {
    auto index = rng_() % channels_.size();
    pick = std::next(channels_.begin(), static_cast<std::ptrdiff_t>(index));
  }
  Queued item = std::move(pick->second.front());
  pick->second.pop_front();
  if (pick->second.empty()) channels_.erase(pick);
  --queued_;
  dispatch(std::move(item));
  return true;
}

void ActorSystem::dispatch(Queued item) {
  if (auto* actor = find(item.to)) {
    if (observer_) observer_(item.to, item.message);
    actor->receive(item.message);
    graveyard_.clear();
    return;
  }
  if (item.message.type != MessageType::Process) return;
  // Follow redirects left behind by duplicates the director shut down.
  ActorAddress target = item.to;
  for (auto it = tombstones_.find(target.id); it != tombstones_.end(); it = tombstones_.find(target.id)) {
    target = it->second;
    if (alive(target)) {
      post(target, std::move(item.message));
      return;
    }
  }
  nlohmann::ordered_json detail;
  detail["exchange"] = item.message.body.value("exchangeId", "");
  detail["from"] = item.message.body.value("senderSubject", "");
  detail["reason"] = "recipientGone";
  trace(nullptr, item.message.instanceId, "", "messageDropped", std::move(detail));
}

std::size_t ActorSystem::run_until_idle(std::size_t limit) {
  std::size_t n = 0;
  while (step()) {
    if (++n >= limit) throw Error(Errc::Stalled, "message limit reached without going idle");
  }
  return n;
}

std::optional<std::int64_t> ActorSystem::next_timer_due() const {
  if (timers_.empty()) return std::nullopt;
  return timers_.top().due;
}

void ActorSystem::advance_to(std::int64_t t) {
  while (!timers_.empty() && timers_.top().due <= t) {
    Timer timer = timers_.top();
    timers_.pop();
    now_ = std::max(now_, timer.due);
    post(timer.to, std::move(timer.message));
  }
  now_ = std::max(now_, t);
}

void ActorSystem::trace(const Actor* actor, std::string instance, std::string subject, std::string event,
                        nlohmann::ordered_json detail) {
  TraceEvent e;
  e.t = now_;
  e.instance = std::move(instance);
  e.subject = std::move(subject);
  e.actor = actor ? actor->address().to_string() : std::string{};
  e.event = std::move(event);
  e.detail = std::move(detail);
  trace_.record(std::move(e));
}

}  // namespace passflow::runtime
