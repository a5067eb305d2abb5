#include "ovalkit/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace ovalkit {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

struct Mapper {
    double x0, y0, scale, height;
    double mx(double wx) const { return (wx - x0) * scale; }
    double my(double wy) const { return height - (wy - y0) * scale; }  // y up in world
};

}  // namespace

SvgWriter::Layer& SvgWriter::current() {
    if (layers_.empty()) layers_.push_back({"default", {}});
    return layers_.back();
}

void SvgWriter::begin_layer(const std::string& id) { layers_.push_back({id, {}}); }

void SvgWriter::polyline(const std::vector<Vec2>& pts, const SvgStyle& style) {
    if (pts.size() < 2) return;
    current().items.push_back(Polyline{pts, style});
}

void SvgWriter::cross_marker(const Vec2& p, const std::string& color, double size_px) {
    current().items.push_back(Marker{p, color, size_px, true});
}

void SvgWriter::dot_marker(const Vec2& p, const std::string& color, double radius_px) {
    current().items.push_back(Marker{p, color, radius_px, false});
}

void SvgWriter::text(const Vec2& p, const std::string& label, const std::string& color) {
    current().items.push_back(Text{p, label, color});
}

std::string SvgWriter::render(double width_px) const {
    double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
    double hi_x = -lo_x, hi_y = -lo_x;
    auto grow = [&](const Vec2& p) {
        lo_x = std::min(lo_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_x = std::max(hi_x, p.x);
        hi_y = std::max(hi_y, p.y);
    };
    for (const auto& layer : layers_)
        for (const auto& item : layer.items)
            std::visit(
                [&](const auto& it) {
                    using T = std::decay_t<decltype(it)>;
                    if constexpr (std::is_same_v<T, Polyline>) {
                        for (const auto& p : it.pts) grow(p);
                    } else {
                        grow(it.p);
                    }
                },
                item);
    if (!(hi_x >= lo_x)) {
        lo_x = lo_y = -1.0;
        hi_x = hi_y = 1.0;
    }
    double span_x = std::max(hi_x - lo_x, 1e-9);
    double span_y = std::max(hi_y - lo_y, 1e-9);
    double margin = 0.05 * std::max(span_x, span_y);
    lo_x -= margin;
    lo_y -= margin;
    span_x += 2.0 * margin;
    span_y += 2.0 * margin;
    double scale = width_px / span_x;
    double height_px = span_y * scale;
    Mapper map{lo_x, lo_y, scale, height_px};

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(width_px)
        << "\" height=\"" << fmt(height_px) << "\" viewBox=\"0 0 " << fmt(width_px) << " "
        << fmt(height_px) << "\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    for (const auto& layer : layers_) {
        out << "  <g id=\"" << layer.id << "\" fill=\"none\">\n";
        for (const auto& item : layer.items) {
            std::visit(
                [&](const auto& it) {
                    using T = std::decay_t<decltype(it)>;
                    if constexpr (std::is_same_v<T, Polyline>) {
                        out << "    <path d=\"";
                        for (std::size_t i = 0; i < it.pts.size(); ++i) {
                            out << (i == 0 ? "M" : " L") << fmt(map.mx(it.pts[i].x)) << " "
                                << fmt(map.my(it.pts[i].y));
                        }
                        out << "\" stroke=\"" << it.style.stroke << "\" stroke-width=\""
                            << fmt(it.style.width) << "\"";
                        if (!it.style.dash.empty()) out << " stroke-dasharray=\"" << it.style.dash << "\"";
                        out << "/>\n";
                    } else if constexpr (std::is_same_v<T, Marker>) {
                        double cx = map.mx(it.p.x), cy = map.my(it.p.y);
                        if (it.cross) {
                            out << "    <path class=\"cross\" d=\"M" << fmt(cx - it.size) << " "
                                << fmt(cy - it.size) << " L" << fmt(cx + it.size) << " "
                                << fmt(cy + it.size) << " M" << fmt(cx - it.size) << " "
                                << fmt(cy + it.size) << " L" << fmt(cx + it.size) << " "
                                << fmt(cy - it.size) << "\" stroke=\"" << it.color
                                << "\" stroke-width=\"1.0\"/>\n";
                        } else {
                            out << "    <circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\""
                                << fmt(it.size) << "\" fill=\"" << it.color << "\"/>\n";
                        }
                    } else {
                        out << "    <text x=\"" << fmt(map.mx(it.p.x) + 6.0) << "\" y=\""
                            << fmt(map.my(it.p.y) - 6.0) << "\" fill=\"" << it.color
                            << "\" font-family=\"sans-serif\" font-size=\"12\">" << it.label
                            << "</text>\n";
                    }
                },
                item);
        }
        out << "  </g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void SvgWriter::save(const std::string& path, double width_px) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write SVG file: " + path);
    f << render(width_px);
}

}  // namespace ovalkit
