#include "pai/gazetteer.hpp"

#include <algorithm>
#include <map>

#include "pai/text.hpp"

namespace pai::gazetteer {

namespace {

struct Tables {
    std::map<std::string, std::string> countries;  // name or alias -> canonical
    std::map<std::string, std::string> cities;     // city -> canonical country
    std::vector<std::string> names;
};

const Tables& tables() {
    static const Tables t = [] {
        Tables t;
        const std::vector<std::pair<const char*, std::vector<const char*>>> countries = {
            {"united states", {"usa", "us", "u.s.", "u.s.a.", "united states of america", "america"}},
            {"united kingdom", {"uk", "u.k.", "great britain", "britain", "england", "scotland", "wales",
                                "northern ireland"}},
            {"canada", {}}, {"mexico", {}}, {"brazil", {"brasil"}}, {"argentina", {}}, {"chile", {}},
            {"colombia", {}}, {"peru", {}}, {"venezuela", {}}, {"cuba", {}}, {"jamaica", {}},
            {"ireland", {"republic of ireland", "eire"}}, {"france", {}}, {"germany", {"deutschland"}},
            {"spain", {"españa"}}, {"portugal", {}}, {"italy", {"italia"}}, {"netherlands", {"holland", "the netherlands"}},
            {"belgium", {}}, {"switzerland", {}}, {"austria", {}}, {"sweden", {}}, {"norway", {}}, {"denmark", {}},
            {"finland", {}}, {"iceland", {}}, {"poland", {}}, {"czech republic", {"czechia"}}, {"slovakia", {}},
            {"hungary", {}}, {"romania", {}}, {"bulgaria", {}}, {"greece", {}}, {"turkey", {"türkiye"}},
            {"russia", {"russian federation"}}, {"ukraine", {}}, {"serbia", {}}, {"croatia", {}},
            {"slovenia", {}}, {"estonia", {}}, {"latvia", {}}, {"lithuania", {}}, {"israel", {}},
            {"egypt", {}}, {"morocco", {}}, {"nigeria", {}}, {"kenya", {}}, {"ethiopia", {}}, {"ghana", {}},
            {"south africa", {}}, {"tanzania", {}}, {"india", {}}, {"pakistan", {}}, {"bangladesh", {}},
            {"sri lanka", {}}, {"nepal", {}}, {"china", {"prc"}}, {"japan", {}}, {"south korea", {"korea"}},
            {"taiwan", {}}, {"hong kong", {}}, {"singapore", {}}, {"malaysia", {}}, {"indonesia", {}},
            {"thailand", {}}, {"vietnam", {"viet nam"}}, {"philippines", {"the philippines"}},
            {"australia", {}}, {"new zealand", {}}, {"united arab emirates", {"uae"}},
            {"saudi arabia", {}}, {"iran", {}}, {"iraq", {}}, {"lebanon", {}}, {"jordan", {}},
        };
        for (const auto& [canon, aliases] : countries) {
            t.countries[canon] = canon;
            for (const char* a : aliases) t.countries[a] = canon;
        }
        const std::vector<const char*> us_states = {
            "alabama", "alaska", "arizona", "arkansas", "california", "colorado", "connecticut", "delaware",
            "florida", "georgia", "hawaii", "idaho", "illinois", "indiana", "iowa", "kansas", "kentucky",
            "louisiana", "maine", "maryland", "massachusetts", "michigan", "minnesota", "mississippi",
            "missouri", "montana", "nebraska", "nevada", "new hampshire", "new jersey", "new mexico",
            "north carolina", "north dakota", "ohio", "oklahoma", "oregon", "pennsylvania", "rhode island",
            "south carolina", "south dakota", "tennessee", "texas", "utah", "vermont", "virginia",
            "washington", "west virginia", "wisconsin", "wyoming",
        };
        for (const char* s : us_states) t.countries.emplace(s, "united states");

        const std::vector<std::pair<const char*, std::vector<const char*>>> cities = {
            {"united states", {"new york", "new york city", "los angeles", "chicago", "houston", "phoenix",
                               "philadelphia", "san antonio", "san diego", "dallas", "austin", "san francisco",
                               "seattle", "denver", "boston", "detroit", "cleveland", "portland", "miami",
                               "atlanta", "minneapolis", "nashville", "new orleans", "las vegas", "baltimore",
                               "pittsburgh", "salt lake city", "honolulu", "anchorage", "kansas city"}},
            {"canada", {"toronto", "vancouver", "montreal", "calgary", "ottawa", "edmonton", "quebec city",
                        "winnipeg", "halifax"}},
            {"mexico", {"mexico city", "guadalajara", "monterrey", "cancun"}},
            {"brazil", {"rio de janeiro", "sao paulo", "são paulo", "brasilia", "salvador", "recife"}},
            {"argentina", {"buenos aires", "cordoba", "mendoza"}},
            {"chile", {"santiago"}}, {"colombia", {"bogota", "bogotá", "medellin", "medellín"}},
            {"peru", {"lima", "cusco"}}, {"cuba", {"havana"}},
            {"united kingdom", {"london", "manchester", "birmingham", "liverpool", "edinburgh", "glasgow",
                                "bristol", "leeds", "oxford", "cambridge", "cardiff", "belfast"}},
            {"ireland", {"dublin", "cork", "galway"}},
            {"france", {"paris", "lyon", "marseille", "nice", "toulouse", "bordeaux", "strasbourg"}},
            {"germany", {"berlin", "munich", "hamburg", "frankfurt", "cologne", "stuttgart", "dresden",
                         "leipzig", "heidelberg"}},
            {"spain", {"madrid", "barcelona", "valencia", "seville", "sevilla", "bilbao", "malaga"}},
            {"portugal", {"lisbon", "porto"}},
            {"italy", {"rome", "milan", "naples", "florence", "venice", "turin", "bologna"}},
            {"netherlands", {"amsterdam", "rotterdam", "the hague", "utrecht"}},
            {"belgium", {"brussels", "antwerp", "ghent"}},
            {"switzerland", {"zurich", "zürich", "geneva", "basel", "bern", "lausanne"}},
            {"austria", {"vienna", "salzburg", "graz"}},
            {"sweden", {"stockholm", "gothenburg", "malmo"}}, {"norway", {"oslo", "bergen"}},
            {"denmark", {"copenhagen", "aarhus"}}, {"finland", {"helsinki"}}, {"iceland", {"reykjavik"}},
            {"poland", {"warsaw", "krakow", "kraków", "gdansk"}}, {"czech republic", {"prague", "brno"}},
            {"hungary", {"budapest"}}, {"romania", {"bucharest"}}, {"greece", {"athens", "thessaloniki"}},
            {"turkey", {"istanbul", "ankara"}}, {"russia", {"moscow", "saint petersburg", "st. petersburg"}},
            {"ukraine", {"kyiv", "kiev", "lviv"}}, {"israel", {"tel aviv", "jerusalem"}},
            {"egypt", {"cairo", "alexandria"}}, {"morocco", {"marrakech", "casablanca"}},
            {"nigeria", {"lagos", "abuja"}}, {"kenya", {"nairobi"}}, {"south africa", {"cape town", "johannesburg"}},
            {"india", {"mumbai", "delhi", "new delhi", "bangalore", "bengaluru", "chennai", "kolkata", "hyderabad",
                       "pune", "jaipur"}},
            {"pakistan", {"karachi", "lahore"}}, {"china", {"beijing", "shanghai", "shenzhen", "guangzhou", "chengdu"}},
            {"japan", {"tokyo", "osaka", "kyoto", "yokohama", "sapporo"}}, {"south korea", {"seoul", "busan"}},
            {"taiwan", {"taipei"}}, {"singapore", {}}, {"thailand", {"bangkok", "chiang mai"}},
            {"vietnam", {"hanoi", "ho chi minh city"}}, {"philippines", {"manila"}},
            {"indonesia", {"jakarta", "bali"}}, {"malaysia", {"kuala lumpur"}},
            {"australia", {"sydney", "melbourne", "brisbane", "perth", "adelaide", "canberra"}},
            {"new zealand", {"auckland", "wellington", "christchurch"}},
            {"united arab emirates", {"dubai", "abu dhabi"}},
        };
        for (const auto& [country, list] : cities) {
            for (const char* c : list) t.cities[c] = country;
        }
        // Place names that double as everyday words are left to the context.
        const std::vector<std::string> ambiguous = {"us", "nice", "turkey", "jordan", "georgia", "washington"};
        auto keep = [&](const std::string& n) {
            return std::find(ambiguous.begin(), ambiguous.end(), n) == ambiguous.end();
        };
        for (const auto& [k, v] : t.countries) {
            if (keep(k)) t.names.push_back(k);
        }
        for (const auto& [k, v] : t.cities) {
            if (keep(k)) t.names.push_back(k);
        }
        std::sort(t.names.begin(), t.names.end(), [](const std::string& a, const std::string& b) {
            return a.size() != b.size() ? a.size() > b.size() : a < b;
        });
        t.names.erase(std::unique(t.names.begin(), t.names.end()), t.names.end());
        return t;
    }();
    return t;
}

std::string key(std::string_view s) {
    auto k = text::normalize(s);
    while (!k.empty() && (k.back() == '.' || k.back() == '!')) k.pop_back();
    if (text::istarts_with(k, "the ") && !tables().countries.count(k)) k.erase(0, 4);
    return k;
}

}  // namespace

std::optional<std::string> canonical_country(std::string_view name) {
    const auto& c = tables().countries;
    auto it = c.find(key(name));
    if (it == c.end()) return std::nullopt;
    return it->second;
}

std::optional<std::string> country_of_city(std::string_view city) {
    const auto& c = tables().cities;
    auto it = c.find(key(city));
    if (it == c.end()) return std::nullopt;
    return it->second;
}

bool is_known_city(std::string_view name) { return tables().cities.count(key(name)) > 0; }

const std::vector<std::string>& all_place_names() { return tables().names; }

}  // namespace pai::gazetteer
