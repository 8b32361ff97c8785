#include "pricer/valuation_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pricer {

namespace {

constexpr double kProbabilitySumTol = 1e-12;

}  // namespace

ValuationDistribution::ValuationDistribution(std::vector<double> valuations,
                                             std::vector<double> probabilities)
    : valuations_(std::move(valuations)), probabilities_(std::move(probabilities)) {
    if (valuations_.empty() || valuations_.size() != probabilities_.size()) {
        throw std::invalid_argument("valuations/probabilities must be non-empty and equal length");
    }
    for (std::size_t k = 0; k < valuations_.size(); ++k) {
        if (!(valuations_[k] >= 0.0 && valuations_[k] <= 1.0)) {
            throw std::invalid_argument("valuations must lie in [0,1]");
        }
        if (k > 0 && !(valuations_[k] > valuations_[k - 1])) {
            throw std::invalid_argument("valuations must be strictly increasing");
        }
        if (!(probabilities_[k] > 0.0)) {
            throw std::invalid_argument("probabilities must be strictly positive");
        }
    }
    double sum = 0.0;
    for (double p : probabilities_) sum += p;
    if (std::fabs(sum - 1.0) > kProbabilitySumTol) {
        throw std::invalid_argument("probabilities must sum to 1 within 1e-12");
    }
    // Renormalize exactly so long simulations cannot drift.
    for (double& p : probabilities_) p /= sum;

    suffix_.assign(valuations_.size() + 1, 0.0);
    for (std::size_t k = valuations_.size(); k-- > 0;) {
        suffix_[k] = probabilities_[k] + suffix_[k + 1];
    }
}

double ValuationDistribution::demand_at(double price) const {
    if (!(price >= 0.0 && price <= 1.0)) {
        throw std::domain_error("price must lie in [0,1]");
    }
    auto it = std::lower_bound(valuations_.begin(), valuations_.end(), price);
    return suffix_[static_cast<std::size_t>(it - valuations_.begin())];
}

double ValuationDistribution::min_probability() const {
    return *std::min_element(probabilities_.begin(), probabilities_.end());
}

double ValuationDistribution::sample_buyer(Rng& rng) const {
    double u = rng.uniform01();
    double cum = 0.0;
    for (std::size_t k = 0; k + 1 < valuations_.size(); ++k) {
        cum += probabilities_[k];
        if (u < cum) return valuations_[k];
    }
    return valuations_.back();
}

DemandPoint demand_point(const ValuationDistribution& model, double price) {
    double d = model.demand_at(price);
    return DemandPoint{price, d, price * d};
}

InstanceSummary summarize(const ValuationDistribution& model) {
    const auto& vs = model.valuations();
    std::vector<double> revenues(vs.size());
    for (std::size_t k = 0; k < vs.size(); ++k) {
        revenues[k] = vs[k] * model.demand_at(vs[k]);
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < vs.size(); ++k) {
        if (revenues[k] > revenues[best]) best = k;  // ties keep the smaller valuation
    }
    InstanceSummary out;
    out.optimal_price = vs[best];
    out.optimal_revenue = revenues[best];
    out.gaps.resize(vs.size());
    for (std::size_t k = 0; k < vs.size(); ++k) {
        out.gaps[k] = out.optimal_revenue - revenues[k];
    }
    for (double g : out.gaps) {
        if (g > 0.0 && (!out.min_gap_positive || g < *out.min_gap_positive)) {
            out.min_gap_positive = g;
        }
    }
    out.min_prob = model.min_probability();
    if (vs.size() >= 2) {
        double c = vs[1] - vs[0];
        for (std::size_t k = 2; k < vs.size(); ++k) c = std::min(c, vs[k] - vs[k - 1]);
        out.min_spacing = c;
    }
    return out;
}

ValuationDistribution gen_theorem2_instance(int which, double eta) {
    if (which == 1) {
        return ValuationDistribution({0.0, 0.5}, {0.5, 0.5});
    }
    if (which == 2) {
        if (!(eta > 0.0 && eta <= 0.25)) {
            throw std::invalid_argument("instance 2 requires 0 < eta <= 1/4");
        }
        return ValuationDistribution({0.0, (1.0 - eta) / 2.0, 0.5}, {0.5 - eta, eta, 0.5});
    }
    throw std::invalid_argument("which must be 1 or 2");
}

ValuationDistribution gen_lowerbound_family(int K, int j, double epsilon) {
    if (K < 2) throw std::invalid_argument("K must be at least 2");
    const int jmin = (K + 1) / 2;
    if (j != 0 && (j < jmin || j > K)) {
        throw std::invalid_argument("j must be 0 or lie in [ceil(K/2), K]");
    }
    if (j != 0) {
        if (!(epsilon > 0.0 && epsilon < 0.025 && 4.0 * K * epsilon < 1.0)) {
            throw std::invalid_argument("epsilon must satisfy 0 < eps < 1/40 and 4*K*eps < 1");
        }
    }
    std::vector<double> vs(K + 1), ps(K + 1);
    for (int i = 0; i <= K; ++i) vs[i] = 0.5 + static_cast<double>(i) / (2.0 * K);
    // P(V >= v_i) = 1/(2 v_i) pins the base probabilities.
    for (int i = 0; i < K; ++i) ps[i] = 1.0 / (2.0 * vs[i]) - 1.0 / (2.0 * vs[i + 1]);
    ps[K] = 0.5;
    if (j != 0) {
        double moved = 4.0 * K * epsilon * ps[j - 1];
        ps[j - 1] -= moved;
        ps[j] += moved;
    }
    return ValuationDistribution(std::move(vs), std::move(ps));
}

std::string instance_to_text(const ValuationDistribution& model) {
    std::ostringstream os;
    os << "K = " << model.size() << "\n";
    char buf[64];
    for (std::size_t k = 0; k < model.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g", model.valuation(k));
        os << "v" << k << " = " << buf << "\n";
        std::snprintf(buf, sizeof(buf), "%.17g", model.probability(k));
        os << "p" << k << " = " << buf << "\n";
    }
    return os.str();
}

void save_instance(const ValuationDistribution& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open instance file for writing: " + path);
    out << instance_to_text(model);
}

ValuationDistribution load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    std::map<std::string, double> kv;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) continue;
        kv[key] = std::stod(val);
    }
    auto it = kv.find("K");
    if (it == kv.end()) throw std::runtime_error("instance file missing K: " + path);
    int K = static_cast<int>(it->second);
    std::vector<double> vs(K), ps(K);
    for (int k = 0; k < K; ++k) {
        auto vk = kv.find("v" + std::to_string(k));
        auto pk = kv.find("p" + std::to_string(k));
        if (vk == kv.end() || pk == kv.end()) {
            throw std::runtime_error("instance file missing v/p entry " + std::to_string(k));
        }
        vs[k] = vk->second;
        ps[k] = pk->second;
    }
    return ValuationDistribution(std::move(vs), std::move(ps));
}

namespace {

std::map<std::string, double> parse_params(const std::string& text) {
    std::map<std::string, double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("bad generator parameter: " + item);
        out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return out;
}

double require_param(const std::map<std::string, double>& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw std::invalid_argument("missing generator parameter: " + key);
    return it->second;
}

}  // namespace

std::vector<std::string> instance_generator_names() {
    return {"theorem2-1", "theorem2-2:eta=<eta>", "lowerbound:K=<K>,j=<j>,eps=<eps>",
            "point:v=<v>", "custom:v0=..,p0=..,v1=..,p1=..", "<path to instance file>"};
}

ValuationDistribution make_instance(const std::string& selector) {
    std::string name = selector;
    std::string params_text;
    auto colon = selector.find(':');
    if (colon != std::string::npos) {
        name = selector.substr(0, colon);
        params_text = selector.substr(colon + 1);
    }
    if (name == "theorem2-1") return gen_theorem2_instance(1);
    if (name == "theorem2-2") {
        return gen_theorem2_instance(2, require_param(parse_params(params_text), "eta"));
    }
    if (name == "lowerbound") {
        auto params = parse_params(params_text);
        int j = static_cast<int>(params.count("j") ? params.at("j") : 0);
        double eps = params.count("eps") ? params.at("eps") : 0.0;
        return gen_lowerbound_family(static_cast<int>(require_param(params, "K")), j, eps);
    }
    if (name == "point") {
        return ValuationDistribution({require_param(parse_params(params_text), "v")}, {1.0});
    }
    if (name == "custom") {
        auto params = parse_params(params_text);
        std::vector<double> vs, ps;
        for (int k = 0;; ++k) {
            auto vk = params.find("v" + std::to_string(k));
            auto pk = params.find("p" + std::to_string(k));
            if (vk == params.end() || pk == params.end()) break;
            vs.push_back(vk->second);
            ps.push_back(pk->second);
        }
        return ValuationDistribution(std::move(vs), std::move(ps));
    }
    return load_instance(selector);
}

}  // namespace pricer
