// Copyright (C) 2026 The mcfuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace mcfuse {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateProjection : public Error {
public:
    using Error::Error;
};

class NonConvergent : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class EmptyTrack : public Error {
public:
    using Error::Error;
};

class UnknownCamera : public Error {
public:
    using Error::Error;
};

class EmptyGroundTruth : public Error {
public:
    using Error::Error;
};

// Malformed or incomplete configuration / input files.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace mcfuse
