#include "noveltree/domains/logistics.hpp"

#include "noveltree/domains/instances.hpp"
#include "noveltree/domains/random.hpp"
#include "noveltree/errors.hpp"
#include "noveltree/iw/optimal.hpp"
#include "noveltree/pddl/grounding.hpp"

namespace noveltree::domains {

void LogisticsSpec::validate() const {
    auto check = [](bool ok, const char *what) {
        if (!ok) throw ConfigError(std::string("invalid Logistics size: ") + what);
    };
    check(n_cities >= 1 && n_cities <= 9, "n_cities must be in [1, 9]");
    check(locations_per_city >= 1 && locations_per_city <= 9, "locations_per_city must be in [1, 9]");
    check(n_packages >= 1 && n_packages <= 9, "n_packages must be in [1, 9]");
    check(trucks() >= 0 && trucks() <= 9, "n_trucks must be in [0, 9]");
    check(n_airplanes >= 0 && n_airplanes <= 9, "n_airplanes must be in [0, 9]");
}

namespace {

struct Layout {
    std::vector<std::string> cities;
    // places[c][0] is the airport of city c.
    std::vector<std::vector<std::string>> places;
};

Layout make_layout(const LogisticsSpec &spec) {
    Layout layout;
    for (int c = 1; c <= spec.n_cities; ++c) {
        layout.cities.push_back("c" + std::to_string(c));
        std::vector<std::string> places{"apt" + std::to_string(c)};
        for (int l = 1; l < spec.locations_per_city; ++l)
            places.push_back("l" + std::to_string(c) + "-" + std::to_string(l));
        layout.places.push_back(std::move(places));
    }
    return layout;
}

pddl::ProblemDef draw(const LogisticsSpec &spec, const Layout &layout, Rng &rng, const std::string &name) {
    pddl::ProblemDef problem;
    problem.name = name;
    problem.domain = "logistics";

    std::vector<std::string> all_places;
    for (std::size_t c = 0; c < layout.cities.size(); ++c) {
        problem.objects.push_back({layout.cities[c], "city"});
        for (std::size_t p = 0; p < layout.places[c].size(); ++p) {
            const auto &place = layout.places[c][p];
            problem.objects.push_back({place, p == 0 ? "airport" : "location"});
            problem.init.emplace_back("in-city", std::vector<std::string>{place, layout.cities[c]});
            all_places.push_back(place);
        }
    }
    for (int t = 1; t <= spec.trucks(); ++t) {
        const std::string truck = "truck" + std::to_string(t);
        problem.objects.push_back({truck, "truck"});
        const auto &city_places = layout.places[(t - 1) % spec.n_cities];
        problem.init.emplace_back("at", std::vector<std::string>{truck, city_places[rng.below(city_places.size())]});
    }
    for (int a = 1; a <= spec.n_airplanes; ++a) {
        const std::string plane = "plane" + std::to_string(a);
        problem.objects.push_back({plane, "airplane"});
        problem.init.emplace_back("at", std::vector<std::string>{plane, layout.places[rng.below(layout.places.size())][0]});
    }
    for (int p = 1; p <= spec.n_packages; ++p) {
        const std::string pkg = "p" + std::to_string(p);
        problem.objects.push_back({pkg, "package"});
        const std::size_t from = rng.below(all_places.size());
        std::size_t to = from;
        if (all_places.size() > 1) {
            to = rng.below(all_places.size() - 1);
            if (to >= from) ++to;
        }
        problem.init.emplace_back("at", std::vector<std::string>{pkg, all_places[from]});
        problem.goal.emplace_back("at", std::vector<std::string>{pkg, all_places[to]});
    }
    core::canonicalize(problem.init);
    core::canonicalize(problem.goal);
    return problem;
}

} // namespace

pddl::ProblemDef logistics_generate(const LogisticsSpec &spec, std::uint64_t seed) {
    spec.validate();
    if (spec.n_cities * spec.locations_per_city < 2)
        throw ConfigError("Logistics needs at least two places so packages can move");
    const Layout layout = make_layout(spec);
    Rng rng(seed);
    const std::string name = "logistics-c" + std::to_string(spec.n_cities) + "-l" +
                             std::to_string(spec.locations_per_city) + "-p" + std::to_string(spec.n_packages) +
                             "-" + std::to_string(seed);
    const auto &domain = builtin_domain(DomainId::logistics);
    for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
        auto problem = draw(spec, layout, rng, name);
        if (iw::optimal_plan_bfs(pddl::ground(domain, problem))) return problem;
    }
    throw GeneratorExhausted("no solvable Logistics instance after " + std::to_string(kMaxRedraws) + " draws");
}

} // namespace noveltree::domains
