#include "gente/vlm_client.hpp"

#include "httplib.h"

#include <stdexcept>

#include "gente/errors.hpp"

namespace gente {

using nlohmann::json;

const char* const kDefaultSystemPromptTemplate =
    "You are a terrain designer for legged-robot simulation. Interpret the "
    "user's description or image, decide which ground features and physical "
    "layers it implies, and respond ONLY with tool calls that build that "
    "terrain. Available tools:\n{tools}\n"
    "Call one tool per terrain feature, in order from base geometry to "
    "physical layers. Do not reply with prose.";

void EndpointConfig::validate() const {
    if (base_url.empty()) throw std::invalid_argument("endpoint base_url must be set");
    if (!(timeout_s > 0.0)) throw std::invalid_argument("endpoint timeout must be positive");
    if (max_retries < 0) throw std::invalid_argument("endpoint max_retries must be >= 0");
}

namespace {

std::string tools_summary(const json& schemas) {
    std::string out;
    for (const auto& tool : schemas) {
        const auto& fn = tool.at("function");
        out += "- " + fn.at("name").get<std::string>() + ": " +
               fn.at("description").get<std::string>() + "\n";
    }
    return out;
}

std::string render_system_prompt(const std::string& tmpl, const json& schemas) {
    std::string prompt = tmpl;
    const std::string placeholder = "{tools}";
    if (auto pos = prompt.find(placeholder); pos != std::string::npos)
        prompt.replace(pos, placeholder.size(), tools_summary(schemas));
    return prompt;
}

}  // namespace

json build_prompt(const GenerationRequest& request, const json& schemas) {
    const bool has_text = !request.text_prompt.empty();
    const bool has_image = request.image_payload.has_value() && !request.image_payload->base64.empty();
    if (request.input_kind == InputKind::Text) {
        if (!has_text) throw std::invalid_argument("text input requires a non-empty text_prompt");
        if (has_image) throw std::invalid_argument("text input must not carry an image payload");
    } else {
        if (!has_image) throw std::invalid_argument("image input requires an image payload");
        if (has_text) throw std::invalid_argument("image input must not carry a text prompt");
    }

    const std::string system_text = render_system_prompt(
        request.system_prompt.empty() ? kDefaultSystemPromptTemplate : request.system_prompt,
        schemas);

    json user_message;
    if (request.input_kind == InputKind::Text) {
        user_message = json{{"role", "user"}, {"content", request.text_prompt}};
    } else {
        const std::string url = "data:" + request.image_payload->media_type + ";base64," +
                                request.image_payload->base64;
        user_message = json{
            {"role", "user"},
            {"content", json::array({json{{"type", "image_url"},
                                          {"image_url", json{{"url", url}}}}})}};
    }

    return json{{"messages", json::array({json{{"role", "system"}, {"content", system_text}},
                                          std::move(user_message)})},
                {"tools", schemas},
                {"tool_choice", "auto"}};
}

TerrainSpec parse_tool_calls(const json& response) {
    const json* tool_calls = nullptr;
    if (response.contains("choices") && response["choices"].is_array() &&
        !response["choices"].empty()) {
        const json& message = response["choices"][0].value("message", json::object());
        if (auto it = message.find("tool_calls"); it != message.end() && it->is_array())
            tool_calls = &*it;
    }
    if (!tool_calls || tool_calls->empty())
        throw SpecError(SpecError::Kind::EmptyResponse, "", "no tool calls in response");

    TerrainSpec spec;
    for (std::size_t i = 0; i < tool_calls->size(); ++i) {
        const json& entry = (*tool_calls)[i];
        const std::string path = "calls[" + std::to_string(i) + "]";
        const json fn = entry.value("function", json::object());
        if (!fn.contains("name") || !fn["name"].is_string())
            throw SpecError(SpecError::Kind::Schema, path, "tool call has no function name");
        ToolCall call;
        call.tool = fn["name"].get<std::string>();
        if (auto it = fn.find("arguments"); it != fn.end()) {
            if (it->is_string()) {
                try {
                    call.args = json::parse(it->get<std::string>());
                } catch (const json::parse_error& e) {
                    throw SpecError(SpecError::Kind::Parse, path + ".args",
                                    std::string("arguments are not valid JSON: ") + e.what());
                }
            } else if (it->is_object()) {
                call.args = *it;
            } else {
                throw SpecError(SpecError::Kind::Schema, path + ".args",
                                "arguments must be a JSON object or an encoded object");
            }
            if (!call.args.is_object())
                throw SpecError(SpecError::Kind::Schema, path + ".args",
                                "arguments must decode to an object");
        }
        spec.calls.push_back(std::move(call));
    }
    validate_spec_structure(spec);
    return spec;
}

namespace {

// splits scheme://host[:port][/prefix] into origin and path prefix
std::pair<std::string, std::string> split_base_url(const std::string& base_url) {
    const auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos)
        throw std::invalid_argument("base_url must start with http:// or https://");
    const auto path_start = base_url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {base_url, ""};
    std::string prefix = base_url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {base_url.substr(0, path_start), prefix};
}

Transport make_http_transport(const EndpointConfig& cfg) {
    return [cfg](const json& body) -> std::string {
        const auto [origin, prefix] = split_base_url(cfg.base_url);
        httplib::Client client(origin);
        client.set_connection_timeout(static_cast<time_t>(cfg.timeout_s),
                                      static_cast<time_t>(cfg.timeout_s * 1e6) % 1000000);
        client.set_read_timeout(static_cast<time_t>(cfg.timeout_s),
                                static_cast<time_t>(cfg.timeout_s * 1e6) % 1000000);
        httplib::Headers headers;
        if (!cfg.api_key.empty())
            headers.emplace("Authorization", "Bearer " + cfg.api_key);
        const auto res =
            client.Post(prefix + "/chat/completions", headers, body.dump(), "application/json");
        if (!res)
            throw NetworkError("POST " + cfg.base_url + "/chat/completions failed: " +
                               httplib::to_string(res.error()));
        if (res->status < 200 || res->status >= 300)
            throw NetworkError("POST " + cfg.base_url + "/chat/completions returned HTTP " +
                               std::to_string(res->status) + ": " + res->body);
        return res->body;
    };
}

}  // namespace

VlmClient::VlmClient(EndpointConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    transport_ = make_http_transport(cfg_);
}

VlmClient::VlmClient(EndpointConfig cfg, Transport transport)
    : cfg_(std::move(cfg)), transport_(std::move(transport)) {
    cfg_.validate();
    if (!transport_) transport_ = make_http_transport(cfg_);
}

GenerationTrace VlmClient::request_terrain(const GenerationRequest& request) const {
    GenerationTrace trace;
    json body = build_prompt(request, export_function_schemas());
    body["model"] = cfg_.model_name;

    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
        GenerationAttempt record;
        record.request_body = body;
        record.raw_response = transport_(body);

        std::string error_text;
        try {
            json response;
            try {
                response = json::parse(record.raw_response);
            } catch (const json::parse_error& e) {
                throw SpecError(SpecError::Kind::Parse, "",
                                std::string("response is not valid JSON: ") + e.what());
            }
            TerrainSpec spec = parse_tool_calls(response);
            record.outcome = "ok";
            record.valid = true;
            trace.attempts.push_back(std::move(record));
            trace.spec = std::move(spec);
            return trace;
        } catch (const SpecError& e) {
            error_text = e.what();
        }

        record.outcome = error_text;
        trace.attempts.push_back(std::move(record));
        trace.failure_reason = error_text;

        // correction turn: echo the failure verbatim and ask again
        body["messages"].push_back(json{{"role", "assistant"},
                                        {"content", trace.attempts.back().raw_response}});
        body["messages"].push_back(
            json{{"role", "user"},
                 {"content", "The previous tool calls were invalid: " + error_text +
                                 ". Respond again with corrected tool calls only."}});
    }
    return trace;
}

json GenerationTrace::to_json() const {
    json attempts_json = json::array();
    for (const auto& a : attempts)
        attempts_json.push_back(json{{"request", a.request_body},
                                     {"response", a.raw_response},
                                     {"outcome", a.outcome},
                                     {"valid", a.valid}});
    json doc{{"attempts", std::move(attempts_json)}};
    if (spec)
        doc["final"] = spec_to_json(*spec);
    else
        doc["final"] = json{{"failure_reason", failure_reason}};
    return doc;
}

}  // namespace gente
