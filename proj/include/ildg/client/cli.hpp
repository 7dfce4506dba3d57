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

#include <ostream>
#include <string>
#include <vector>

#include "ildg/client/grid_client.hpp"

namespace ildg::client {

struct CliOptions {
  ClientHooks hooks;
  proto::RpcClient::Observer observer;
};

/// The `ildg` command line, minus the program name. Returns the exit status:
/// 0 on full success, 1 when any grid operation failed, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliOptions& options = {});

/// Replaces every well-formed GFN in `text` with project:series:update.
std::string hide_gfns(std::string_view text);

}  // namespace ildg::client
