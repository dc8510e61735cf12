#include "shiftkit/topic.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace shiftkit {

namespace {

std::string fmt(const char *spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

constexpr Measure kMeasures[] = {Measure::Betweenness, Measure::RandomWalkBetweenness,
                                 Measure::PageRank};

} // namespace

const CentralityTable &TopicNetwork::table(Measure m) const {
    for (const auto &t : centrality)
        if (t.measure == m)
            return t;
    throw std::out_of_range(std::string("topic network has no ") + measure_name(m) + " table");
}

TopicNetwork annotate_topic_network(WeightedGraph topic, const TopicParams &params) {
    TopicNetwork net;
    net.alpha = params.alpha;
    net.graph = std::move(topic);
    if (net.graph.empty())
        return net;
    net.community = louvain(net.graph, params.louvain_seed);
    net.centrality.push_back(betweenness(net.graph));
    net.centrality.push_back(random_walk_betweenness(net.graph));
    net.centrality.push_back(pagerank(net.graph, params.pagerank));
    net.node_size.reserve(net.graph.node_count());
    for (std::size_t i = 0; i < net.graph.node_count(); ++i)
        net.node_size.push_back(params.size_scale *
                                std::sqrt(static_cast<double>(net.graph.usage(i))));
    return net;
}

TopicNetwork build_topic_network(const WeightedGraph &original, const TopicParams &params) {
    return annotate_topic_network(largest_component(disparity_filter(original, params.alpha)), params);
}

std::vector<CentralityRow> centrality_table(const TopicNetwork &net, std::size_t k) {
    std::vector<CentralityRow> rows;
    for (const auto &t : net.centrality) {
        const auto limit = std::min(k, t.ranking.size());
        for (std::size_t r = 0; r < limit; ++r) {
            auto node = t.ranking[r];
            rows.push_back({t.measure, r + 1, net.graph.label(node), t.scores[node]});
        }
    }
    return rows;
}

std::string centrality_csv(const std::vector<CentralityRow> &rows) {
    std::string out = "measure,rank,node,score\n";
    for (const auto &r : rows)
        out += std::string(measure_name(r.measure)) + "," + std::to_string(r.rank) + "," + r.node +
               "," + fmt("%.4f", r.score) + "\n";
    return out;
}

std::string topic_graphml(const TopicNetwork &net) {
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
    out += "  <key id=\"usage\" for=\"node\" attr.name=\"usage\" attr.type=\"long\"/>\n";
    out += "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n";
    out += "  <key id=\"size\" for=\"node\" attr.name=\"size\" attr.type=\"double\"/>\n";
    for (auto m : kMeasures)
        out += std::string("  <key id=\"") + measure_name(m) + "\" for=\"node\" attr.name=\"" +
               measure_name(m) + "\" attr.type=\"double\"/>\n";
    out += "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n";
    out += "  <graph id=\"topic\" edgedefault=\"undirected\">\n";
    const auto &g = net.graph;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        out += "    <node id=\"" + xml_escape(g.label(i)) + "\">\n";
        out += "      <data key=\"usage\">" + std::to_string(g.usage(i)) + "</data>\n";
        if (i < net.community.labels.size())
            out += "      <data key=\"community\">" + std::to_string(net.community.labels[i]) +
                   "</data>\n";
        if (i < net.node_size.size())
            out += "      <data key=\"size\">" + fmt("%.6f", net.node_size[i]) + "</data>\n";
        for (const auto &t : net.centrality)
            out += std::string("      <data key=\"") + measure_name(t.measure) + "\">" +
                   fmt("%.10f", t.scores[i]) + "</data>\n";
        out += "    </node>\n";
    }
    for (const auto &e : g.edges()) {
        out += "    <edge source=\"" + xml_escape(g.label(e.u)) + "\" target=\"" +
               xml_escape(g.label(e.v)) + "\">\n";
        out += "      <data key=\"weight\">" + std::to_string(e.weight) + "</data>\n";
        out += "    </edge>\n";
    }
    out += "  </graph>\n</graphml>\n";
    return out;
}

} // namespace shiftkit
