#pragma once

#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "splitcp/ingest.hpp"

namespace splitcp::fixture {

// A pitcher who relieves in the first season and starts in the second, with
// the primary fastball's mean velocity moving from mu_before to mu_after at
// the role change. Relief outings: 20 pitches entering in the 7th, one inning.
// Starts: 60 pitches from the 1st inning, six innings.
struct RoleChangePitcher {
  std::string pitcher_id;
  std::string pitch_type = "FF";
  std::size_t n_before = 600;
  std::size_t n_after = 600;
  double mu_before = 95.0;
  double mu_after = 94.0;
  double sigma = 0.7;
  std::uint64_t seed = 1;
};

inline std::vector<ingest::PitchEvent> role_change_events(const RoleChangePitcher& p) {
  using namespace std::chrono;
  std::mt19937_64 rng(p.seed);
  std::normal_distribution<double> noise(0.0, p.sigma);
  std::vector<ingest::PitchEvent> events;

  auto emit_phase = [&](std::size_t count, double mu, int season, int per_game, int entered,
                        double innings, sys_days start) {
    std::size_t made = 0;
    for (int game = 0; made < count; ++game) {
      ingest::Date date{start + days{game * 3}};
      std::string game_id = p.pitcher_id + "-" + std::to_string(season) + "-" + std::to_string(game);
      for (int k = 0; k < per_game && made < count; ++k) {
        ingest::PitchEvent ev;
        ev.game_date = date;
        ev.game_id = game_id;
        ev.pitcher_id = p.pitcher_id;
        ev.batter_id = "b" + std::to_string(k % 9);
        ev.season = season;
        ev.inning = entered + static_cast<int>(k / std::max(1, per_game / static_cast<int>(innings)));
        ev.inning_entered = entered;
        ev.outing_innings = innings;
        ev.at_bat_number = k / 4 + 1;
        ev.pitch_number = k % 4 + 1;
        ev.in_zone = k % 2 == 0;
        ev.swung = k % 3 == 0;
        if (ev.swung) ev.made_contact = k % 5 != 0;
        if (k % 4 == 3) {
          // Off-speed filler that the velocity series must ignore.
          ev.pitch_type = "SL";
          ev.release_speed = 85.0;
        } else {
          ev.pitch_type = p.pitch_type;
          ev.release_speed = mu + noise(rng);
          ++made;
        }
        events.push_back(ev);
      }
    }
  };
  emit_phase(p.n_before, p.mu_before, 2023, 20, 7, 1.0, sys_days{year{2023} / April / 1});
  emit_phase(p.n_after, p.mu_after, 2024, 60, 1, 6.0, sys_days{year{2024} / April / 1});
  return events;
}

// Eleven reliever-to-starter transitions whose velocity drops sit between
// consecutive rungs of kGroundTruthLadder, so each pitcher's largest flagging
// shift is known in advance. One pitcher (667755) barely changes and should
// not be flagged.
inline const std::vector<double> kGroundTruthLadder = {0.5, 1, 1.5, 2, 3, 4, 5, 6};

struct RosterFixture {
  std::vector<ingest::PitchEvent> events;
  std::vector<ingest::RosterEntry> roster;
  std::vector<std::pair<std::string, std::optional<double>>> expected;  // max threshold
};

inline RosterFixture ground_truth_roster() {
  struct Row {
    const char* id;
    ingest::FastballType type;
    double drop;  // mu_before - mu_after
    std::optional<double> threshold;
  };
  const std::vector<Row> rows = {
      {"663855", ingest::FastballType::sinker, 5.5, 5.0},
      {"625643", ingest::FastballType::four_seam, 2.5, 2.0},
      {"669854", ingest::FastballType::four_seam, 0.75, 0.5},
      {"650633", ingest::FastballType::sinker, 1.25, 1.0},
      {"641793", ingest::FastballType::four_seam, 1.25, 1.0},
      {"667755", ingest::FastballType::sinker, -0.12, std::nullopt},
      {"676979", ingest::FastballType::four_seam, 0.75, 0.5},
      {"641302", ingest::FastballType::four_seam, 0.75, 0.5},
      {"669467", ingest::FastballType::four_seam, 1.25, 1.0},
      {"666142", ingest::FastballType::four_seam, 1.25, 1.0},
      {"640455", ingest::FastballType::four_seam, 1.25, 1.0},
  };
  RosterFixture fx;
  std::uint64_t seed = 100;
  for (const auto& r : rows) {
    RoleChangePitcher p;
    p.pitcher_id = r.id;
    p.pitch_type = std::string(ingest::pitch_code(r.type));
    p.mu_before = 95.0;
    p.mu_after = 95.0 - r.drop;
    p.seed = seed++;
    auto ev = role_change_events(p);
    fx.events.insert(fx.events.end(), ev.begin(), ev.end());
    fx.roster.push_back({r.id, r.type});
    fx.expected.emplace_back(r.id, r.threshold);
  }
  return fx;
}

}  // namespace splitcp::fixture
