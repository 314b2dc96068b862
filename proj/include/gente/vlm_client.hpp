#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gente/terrain_spec.hpp"

namespace gente {

struct EndpointConfig {
    std::string base_url;     // e.g. http://127.0.0.1:8080/v1
    std::string api_key;      // resolved from GENTE_API_KEY by the CLI
    std::string model_name;
    double timeout_s = 30.0;
    int max_retries = 2;      // correction turns after the first attempt

    void validate() const;
};

enum class InputKind { Text, Image };

struct ImagePayload {
    std::string base64;
    std::string media_type;  // e.g. image/png
};

struct GenerationRequest {
    InputKind input_kind = InputKind::Text;
    std::string text_prompt;
    std::optional<ImagePayload> image_payload;
    std::string system_prompt;  // empty selects the built-in template
};

struct GenerationAttempt {
    nlohmann::json request_body;  // auth header never recorded
    std::string raw_response;
    std::string outcome;          // "ok" or the validation error fed back
    bool valid = false;
};

// Full record of one generation run: every attempt plus the final spec or
// the failure reason.
struct GenerationTrace {
    std::vector<GenerationAttempt> attempts;
    std::optional<TerrainSpec> spec;
    std::string failure_reason;

    bool succeeded() const { return spec.has_value(); }
    nlohmann::json to_json() const;
};

// Chat-completions request body: system + user messages with the tool
// definitions attached. Exactly one of text or image input must be
// populated, matching the declared input kind.
nlohmann::json build_prompt(const GenerationRequest& request, const nlohmann::json& schemas);

// Extracts the tool calls from a chat-completions response and assembles a
// validated whole-map spec (default 1x1 layout). Throws SpecError, with
// Kind::EmptyResponse when the response carries no tool calls.
TerrainSpec parse_tool_calls(const nlohmann::json& response);

// POSTs a body to {base_url}/chat/completions and returns the raw response
// body. Injecting a different transport keeps every test offline-scriptable.
using Transport = std::function<std::string(const nlohmann::json& body)>;

class VlmClient {
public:
    explicit VlmClient(EndpointConfig cfg);
    VlmClient(EndpointConfig cfg, Transport transport);

    // Runs the interpret -> parameterize -> construct loop: sends the
    // prompt, validates the returned calls, and re-prompts with the
    // validator's message on failure, up to max_retries correction turns.
    GenerationTrace request_terrain(const GenerationRequest& request) const;

private:
    EndpointConfig cfg_;
    Transport transport_;
};

// The built-in system prompt template; "{tools}" is replaced by a compact
// summary of the registered tools.
extern const char* const kDefaultSystemPromptTemplate;

}  // namespace gente
