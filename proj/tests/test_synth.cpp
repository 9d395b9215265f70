#include <doctest.h>

#include <cmath>

#include "calorie/kinetics.hpp"
#include "calorie/mass.hpp"
#include "calorie/synth.hpp"
#include "oracles.hpp"

using namespace calorie;
using namespace calorie::synth;

TEST_CASE("stationary spec: 2 s at 25 fps is 51 constant frames") {
  MotionSpec spec{JointMap<Motion>(Stationary{}), 2.0, 25.0};
  const auto pose = default_pose();
  const auto s = generate(spec, pose);
  CHECK(s.size() == 51);
  CHECK(s.nominal_fps() == 25.0);
  for (const auto& f : s.frames()) CHECK(f.positions == pose);
  CHECK(expected_energy(spec, JointMap<double>(3.0)) == EnergyVector{});
}

TEST_CASE("constant velocity advances 0.04 m per frame at 25 fps") {
  MotionSpec spec{JointMap<Motion>(ConstantVelocity{{1.0, 0.0, 0.0}}), 1.0, 25.0};
  const auto s = generate(spec, default_pose());
  REQUIRE(s.size() == 26);
  for (std::size_t k = 1; k < s.size(); ++k) {
    const auto step = s.frames()[k].positions[JointId::Head] - s.frames()[k - 1].positions[JointId::Head];
    CHECK(step.x == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(step.y == 0.0);
  }
}

TEST_CASE("sinusoid samples the analytic trajectory") {
  MotionSpec spec{JointMap<Motion>(Stationary{}), 1.0, 25.0};
  spec.motions[JointId::LeftWrist] = Sinusoid{0.5, 2.0 * M_PI, Axis::Z};
  const JointMap<Vec3> origin{};
  const auto s = generate(spec, origin);
  for (const auto& f : s.frames()) {
    CHECK(f.positions[JointId::LeftWrist].z == 0.5 * std::sin(2.0 * M_PI * f.t));
    CHECK(f.positions[JointId::LeftWrist].x == 0.0);
  }
}

TEST_CASE("expected_energy closed form for constant velocity") {
  MotionSpec spec{JointMap<Motion>(Stationary{}), 1.0, 25.0};
  spec.motions[JointId::Spine] = ConstantVelocity{{2.0, 0.0, 0.0}};
  JointMap<double> masses(0.0);
  masses[JointId::Spine] = 3.0;
  const auto k = expected_energy(spec, masses);
  CHECK(k[JointId::Spine] == doctest::Approx(150.0).epsilon(1e-15));

  JointMap<Vec3> origin{};
  const auto pipeline = accumulate(frame_energies(velocities(generate(spec, origin)), masses));
  CHECK(oracle::rel_close(pipeline[JointId::Spine], 150.0, 1e-9));
}

TEST_CASE("expected_energy matches the pipeline for sinusoids") {
  MotionSpec spec{JointMap<Motion>(Sinusoid{0.25, 3.0, Axis::Y}), 4.0, 30.0};
  spec.motions[JointId::Head] = Sinusoid{0.5, 2.0 * M_PI, Axis::X};
  const SubjectRecord subject("s", 72.0, standard_profile());
  const auto oracle_k = expected_energy(spec, mass_of(subject.mass_profile, subject.weight_kg));
  const auto pipeline = session_energy(generate(spec, default_pose()), subject);
  for (JointId j : kAllJoints) CHECK(oracle::rel_close(pipeline[j], oracle_k[j], 1e-9));
}

TEST_CASE("jitter is deterministic per seed and off by default") {
  MotionSpec spec{JointMap<Motion>(Stationary{}), 1.0, 25.0, 0.01, 42};
  const auto a = generate(spec, default_pose());
  const auto b = generate(spec, default_pose());
  CHECK(a.frames()[3].positions == b.frames()[3].positions);
  CHECK_FALSE(a.frames()[3].positions == default_pose());
  CHECK_THROWS_AS(expected_energy(spec, JointMap<double>(1.0)), ValidationError);
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS(generate({JointMap<Motion>(Stationary{}), 0.0, 25.0}, default_pose()), ValidationError);
  CHECK_THROWS_AS(generate({JointMap<Motion>(Stationary{}), 1.0, -1.0}, default_pose()), ValidationError);
}
