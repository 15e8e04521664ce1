#pragma once

namespace gaitforge {

constexpr const char* kVersion = "0.1.0";
constexpr int kPolicySchemaVersion = 1;

}  // namespace gaitforge
