#include "wban/protocol.hpp"

namespace wban {

std::unique_ptr<Protocol> make_proposed(const ScenarioConfig& cfg);
std::unique_ptr<Protocol> make_baseline(ProtocolKind kind, const ScenarioConfig& cfg);

std::unique_ptr<Protocol> make_protocol(ProtocolKind kind, const ScenarioConfig& cfg)
{
    if (kind == ProtocolKind::proposed)
        return make_proposed(cfg);
    return make_baseline(kind, cfg);
}

}  // namespace wban
