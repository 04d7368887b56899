#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pai {

/// Base of every error raised by the library. `name()` is the stable,
/// user-facing error identifier (the CLI prints it on failure).
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message)
        : std::runtime_error(message), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Error that retains the raw model output which failed to parse.
class RawTextError : public Error {
public:
    RawTextError(std::string name, const std::string& message, std::string raw)
        : Error(std::move(name), message), raw_(std::move(raw)) {}

    const std::string& raw_text() const noexcept { return raw_; }

private:
    std::string raw_;
};

#define PAI_DEFINE_ERROR(Type, Base)                                          \
    class Type : public Base {                                                \
    public:                                                                   \
        explicit Type(const std::string& message) : Base(#Type, message) {}   \
    }

#define PAI_DEFINE_RAW_ERROR(Type)                                            \
    class Type : public RawTextError {                                        \
    public:                                                                   \
        Type(const std::string& message, std::string raw)                     \
            : RawTextError(#Type, message, std::move(raw)) {}                 \
    }

// core_model
PAI_DEFINE_ERROR(LookupError, Error);
PAI_DEFINE_ERROR(DepthExceeded, Error);
PAI_DEFINE_ERROR(FanoutExceeded, Error);
PAI_DEFINE_ERROR(PreconditionError, Error);
PAI_DEFINE_ERROR(DomainError, Error);

// llm_gateway
PAI_DEFINE_ERROR(BackendUnavailable, Error);
PAI_DEFINE_ERROR(TransientBackendError, Error);
PAI_DEFINE_ERROR(BackendError, Error);
PAI_DEFINE_RAW_ERROR(RefusalError);

class MissingSlot : public Error {
public:
    explicit MissingSlot(std::string slot)
        : Error("MissingSlot", "missing template slot '" + slot + "'"), slot_(std::move(slot)) {}
    const std::string& slot() const noexcept { return slot_; }

private:
    std::string slot_;
};

// profile_forge
PAI_DEFINE_ERROR(GenerationStalled, Error);
PAI_DEFINE_ERROR(StyleGenerationFailed, Error);

// thread_engine
PAI_DEFINE_RAW_ERROR(TopicParseError);
PAI_DEFINE_RAW_ERROR(CommentParseError);
PAI_DEFINE_ERROR(TurnSkipped, Error);

// tag_oracle
PAI_DEFINE_RAW_ERROR(TagParseError);
PAI_DEFINE_ERROR(DecisionError, Error);

// pai_eval
PAI_DEFINE_ERROR(EmptyProfile, Error);

// datastore
PAI_DEFINE_ERROR(MigrationRequired, Error);
PAI_DEFINE_ERROR(IntegrityError, Error);
PAI_DEFINE_ERROR(ImportError, Error);

#undef PAI_DEFINE_ERROR
#undef PAI_DEFINE_RAW_ERROR

}  // namespace pai
