#pragma once

#include <stdexcept>
#include <string>

namespace poseaug {

/// Malformed or inconsistent model/manifest/image file.
class FormatError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Rotation too close to gimbal lock for a stable yaw/roll split.
class DegeneratePoseError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Landmark geometry or regularised system without a unique solution.
class FitDegenerateError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class TriangulationError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class RenderError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Face hull leaves no room for background anchors.
class NoBackgroundError : public RenderError
{
public:
    using RenderError::RenderError;
};

class AlignmentError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Image dimensions incompatible with the requested operation.
class SizeError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace poseaug

namespace poseaug {

/// A batch step skipped more inputs than its failure policy allows.
class PipelineError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace poseaug
