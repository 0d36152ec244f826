"""Tour of the benchmark suite: landscape classes, instancing, and transforms.

Every function scales to any dimension >= 2 and comes in 15 deterministic
instances; an instance hides its optimum at a seeded shift (plus a rotation
for the non-separable classes) and offsets the optimal value.
"""

import numpy as np

from infillbench import evaluate, list_suite, make_instance


def main():
    print(f"{'id':>3} {'name':<20} {'rotated':<8} tags")
    for entry in list_suite():
        print(f"{entry.function_id:>3} {entry.name:<20} {str(entry.rotated):<8} {', '.join(entry.tags)}")

    print("\nthree instances of 5-d Rastrigin hide their optimum in different spots:")
    for instance_id in (1, 2, 3):
        f = make_instance(3, 5, instance_id)
        print(f"  instance {instance_id}: x_opt = {np.array2string(f.x_opt, precision=3)}  "
              f"f_opt = {f.f_opt:+.2f}  check f(x_opt) - f_opt = "
              f"{evaluate(f, f.x_opt) - f.f_opt:.1e}")

    print("\nrotation makes the sharp ridge non-separable (instance 1, d=3):")
    ridge = make_instance(13, 3, 1)
    print(f"  orthogonality error of the rotation: "
          f"{np.abs(ridge.rotation.T @ ridge.rotation - np.eye(3)).max():.2e}")

    rng = np.random.default_rng(0)
    points = rng.uniform(-5.0, 5.0, (5, 3))
    print("  random in-box evaluations (all above f_opt):")
    for p in points:
        print(f"    f({np.array2string(p, precision=2)}) = {evaluate(ridge, p):10.2f}"
              f"   (f_opt = {ridge.f_opt:+.2f})")


if __name__ == "__main__":
    main()
