#include "citemerge/types.hpp"

#include <array>
#include <utility>

namespace citemerge {

std::string_view to_string(DatasetTag tag) {
  return tag == DatasetTag::A ? "a" : "b";
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::AOnly: return "a";
    case Provenance::BOnly: return "b";
    case Provenance::Both: return "both";
  }
  return "?";
}

namespace {

constexpr std::array<std::pair<Cluster, std::string_view>, 15> kClusterNames{{
    {Cluster::Medicine, "Medicine"},
    {Cluster::Science, "Science"},
    {Cluster::Biology, "Biology"},
    {Cluster::Engineering, "Engineering"},
    {Cluster::SocialScience, "Social Science"},
    {Cluster::Geography, "Geography"},
    {Cluster::Arts, "Arts"},
    {Cluster::ComputerScience, "Computer Science"},
    {Cluster::Psychology, "Psychology"},
    {Cluster::Management, "Management"},
    {Cluster::LawAndPolicy, "Law and Policy"},
    {Cluster::Building, "Building"},
    {Cluster::Education, "Education"},
    {Cluster::CityDevelopment, "City Development"},
    {Cluster::Unclassified, "Unclassified"},
}};

}  // namespace

std::string_view to_string(Cluster c) {
  return kClusterNames[static_cast<std::size_t>(c)].second;
}

std::optional<Cluster> cluster_from_name(std::string_view name) {
  for (int i = 0; i < kNamedClusterCount; ++i) {
    if (kClusterNames[i].second == name) return kClusterNames[i].first;
  }
  return std::nullopt;
}

}  // namespace citemerge
