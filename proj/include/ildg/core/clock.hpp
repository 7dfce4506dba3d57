/*
 * Copyright 2026 The ildg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace ildg {

using TimePoint = std::chrono::sys_time<std::chrono::milliseconds>;

class Clock {
 public:
  virtual ~Clock() = default;
  virtual TimePoint now() const = 0;
};

class SystemClock final : public Clock {
 public:
  TimePoint now() const override {
    return std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now());
  }
};

// Test clock; only moves when told to.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(TimePoint start = TimePoint{std::chrono::milliseconds{1'700'000'000'000}})
      : ms_(start.time_since_epoch().count()) {}

  TimePoint now() const override { return TimePoint{std::chrono::milliseconds{ms_.load()}}; }
  void advance(std::chrono::milliseconds delta) { ms_ += delta.count(); }
  void set(TimePoint t) { ms_ = t.time_since_epoch().count(); }

 private:
  std::atomic<std::int64_t> ms_;
};

inline std::shared_ptr<Clock> system_clock() { return std::make_shared<SystemClock>(); }

/// "2026-10-15T12:34:56.789Z"
std::string format_timestamp(TimePoint t);

/// Accepts "YYYY-MM-DD", "YYYY-MM-DDThh:mm:ssZ" and "YYYY-MM-DDThh:mm:ss.mmmZ".
std::optional<TimePoint> parse_timestamp(std::string_view text);

}  // namespace ildg
