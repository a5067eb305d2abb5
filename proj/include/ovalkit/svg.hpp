#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ovalkit/geom.hpp"

namespace ovalkit {

struct SvgStyle {
    std::string stroke{"#000000"};
    double width{1.2};
    std::string dash{};  // e.g. "4,2"; empty for solid
};

/// Layered SVG 1.1 document in world coordinates. The viewport transform is
/// computed at render time from the bounding box of everything drawn, plus a
/// 5% margin. Output is byte-deterministic for identical input.
class SvgWriter {
public:
    /// Layers render in insertion order (first = bottom).
    void begin_layer(const std::string& id);
    void polyline(const std::vector<Vec2>& pts, const SvgStyle& style);
    void cross_marker(const Vec2& p, const std::string& color, double size_px = 5.0);
    void dot_marker(const Vec2& p, const std::string& color, double radius_px = 3.0);
    void text(const Vec2& p, const std::string& label, const std::string& color);

    bool empty() const { return layers_.empty(); }
    std::string render(double width_px = 900.0) const;
    void save(const std::string& path, double width_px = 900.0) const;

private:
    struct Polyline {
        std::vector<Vec2> pts;
        SvgStyle style;
    };
    struct Marker {
        Vec2 p;
        std::string color;
        double size;
        bool cross;
    };
    struct Text {
        Vec2 p;
        std::string label;
        std::string color;
    };
    using Item = std::variant<Polyline, Marker, Text>;
    struct Layer {
        std::string id;
        std::vector<Item> items;
    };
    std::vector<Layer> layers_;
    Layer& current();
};

}  // namespace ovalkit
