#include "wban/types.hpp"

namespace wban {

std::string_view to_string(PacketClass c)
{
    switch (c) {
    case PacketClass::normal: return "normal";
    case PacketClass::on_demand: return "on_demand";
    case PacketClass::emergency: return "emergency";
    }
    return "unknown";
}

std::string_view to_string(ControlType c)
{
    switch (c) {
    case ControlType::none: return "none";
    case ControlType::hello: return "hello";
    case ControlType::hotspot_notice: return "hotspot_notice";
    case ControlType::route_request: return "route_request";
    case ControlType::route_reply: return "route_reply";
    case ControlType::route_error: return "route_error";
    case ControlType::stability_probe: return "stability_probe";
    }
    return "unknown";
}

}  // namespace wban
