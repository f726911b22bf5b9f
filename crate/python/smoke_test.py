"""Smoke test for the swapgame extension module."""

import math

import swapgame


def main():
    model = swapgame.Model()
    assert abs(model.mu - 0.3433) < 1e-4, model.mu
    assert abs(swapgame.calibrate_drift(0.03, 0.2, 1.0, 2.0) - model.mu) < 1e-15

    v = swapgame.Valuation(model, swapgame.Contract(0.05, q=0.5))
    print(f"case {v.case}: A* = {v.a_star:.6f}, B* = {v.b_star:.6f}, V(1.5) = {v.value(1.5):.6f}")
    assert v.case == 1 and 0.0 < v.a_star < v.b_star < math.inf
    curve = v.curve([0.25 * i for i in range(1, 25)])
    assert all(b <= a + 1e-12 for a, b in zip(curve, curve[1:]))
    assert v.region(0.5 * v.a_star) == "seller_exercise"

    up = swapgame.Valuation(model, swapgame.Contract(0.05, p_hat=0.075, alpha_hat=1.5))
    assert up.case == 1 and abs(up.game_value(2.0) + v.game_value(2.0)) < 1e-10

    p_star, value = swapgame.premium(model, 1.5)
    print(f"p* = {p_star:.6f} (V = {value:.2e})")
    assert abs(value) < 1e-8

    mean, stderr = swapgame.mc_default_transform(model, 1.5, n_paths=20000, seed=1)
    exact = model.default_transform(1.5)
    print(f"default transform: MC {mean:.5f} +- {stderr:.5f}, analytic {exact:.5f}")
    assert abs(mean - exact) < 4 * stderr

    try:
        swapgame.Contract(0.05, q=0.5, gamma_s=0.6)
    except ValueError as e:
        print(f"rejected: {e}")
    else:
        raise AssertionError("expected ValueError")
    print("smoke test passed")


if __name__ == "__main__":
    main()
