/* Copyright 2026 The scene4d Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <stdexcept>
#include <string>

namespace scene4d {

// Base of every error the library raises. Each subclass maps to one failure
// class callers are expected to handle differently.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class InvalidDepth : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Normal equations of the depth alignment are rank deficient.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

// A hole has no known pixel anywhere in the image to propagate from.
class NothingToInpaintFrom : public Error {
 public:
  using Error::Error;
};

class AdapterUnavailable : public Error {
 public:
  using Error::Error;
};

// A model service answered, but the answer breaks the wire contract.
class ProtocolViolation : public Error {
 public:
  using Error::Error;
};

class IncompleteMatrix : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class MissingCell : public FormatError {
 public:
  using FormatError::FormatError;
};

}  // namespace scene4d
