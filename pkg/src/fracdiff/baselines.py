"""Published reference errors and rates for the three benchmark tables.

Every entry is ``N -> (max_error, rate)`` at ``t = 1/2``; the coarsest level
has no rate.  Values are transcribed cell by cell from the published tables.
"""

# table 1: 1D implicit, tau = dx, c = x^alpha t^(1-gamma); keyed (alpha, gamma)
TABLE1 = {
    # column "alpha = 1.2, gamma = 0.9"
    (1.2, 0.9): {40: (3.1438e-4, None), 80: (1.4713e-4, 1.0954),
                 160: (6.8748e-5, 1.0977), 320: (3.2097e-5, 1.0989)},
    # column "alpha = 1.2, gamma = 0.5"
    (1.2, 0.5): {40: (6.3187e-5, None), 80: (2.2183e-5, 1.5102),
                 160: (7.7888e-6, 1.5100), 320: (2.7378e-6, 1.5084)},
    # column "alpha = 1.2, gamma = 0.1"
    (1.2, 0.1): {40: (2.7395e-5, None), 80: (7.6703e-6, 1.8366),
                 160: (2.0317e-6, 1.9166), 320: (5.2912e-7, 1.9410)},
    # column "alpha = 1.9, gamma = 0.9"
    (1.9, 0.9): {40: (2.7655e-4, None), 80: (1.2919e-4, 1.0981),
                 160: (6.0294e-5, 1.0994), 320: (2.8133e-5, 1.0997)},
    # column "alpha = 1.9, gamma = 0.5"
    (1.9, 0.5): {40: (5.6774e-5, None), 80: (1.9669e-5, 1.5293),
                 160: (6.8351e-6, 1.5249), 320: (2.3841e-6, 1.5195)},
    # column "alpha = 1.9, gamma = 0.1"
    (1.9, 0.1): {40: (2.1114e-5, None), 80: (5.4717e-6, 1.9482),
                 160: (1.4145e-6, 1.9517), 320: (3.6518e-7, 1.9536)},
}

# table 2: 1D implicit, gamma = 0.9, tau = dx^(2/(2-gamma)); keyed alpha
TABLE2_GAMMA = 0.9
TABLE2 = {
    1.9: {10: (2.4699e-4, None), 20: (6.2966e-5, 1.9718),
          40: (1.5697e-5, 2.0041), 80: (3.9368e-6, 1.9954)},
    1.5: {10: (2.5801e-4, None), 20: (6.5569e-5, 1.9763),
          40: (1.6226e-5, 2.0148), 80: (4.0475e-6, 2.0032)},
    1.2: {10: (2.5510e-4, None), 20: (6.4560e-5, 1.9823),
          40: (1.5934e-5, 2.0185), 80: (4.0433e-6, 1.9785)},
    # alpha in (0, 1)
    0.3: {10: (2.4135e-4, None), 20: (6.1043e-5, 1.9832),
          40: (1.5085e-5, 2.0167), 80: (3.7583e-6, 2.0050)},
}

# table 3: 2D implicit, tau = dx = dy; keyed (gamma, alpha, beta)
TABLE3 = {
    (0.9, 1.2, 1.3): {10: (7.7867e-5, None), 20: (3.6381e-5, 1.0978),
                      30: (2.3084e-5, 1.1220), 40: (1.6839e-5, 1.0965)},
    (0.5, 1.2, 1.3): {10: (3.1936e-5, None), 20: (1.0357e-5, 1.6246),
                      30: (5.4951e-6, 1.5632), 40: (3.4925e-6, 1.5755)},
    (0.1, 1.2, 1.3): {10: (2.2077e-5, None), 20: (5.6507e-6, 1.9660),
                      30: (2.5497e-6, 1.9627), 40: (1.4509e-6, 1.9598)},
    (0.9, 1.8, 1.7): {10: (7.8209e-5, None), 20: (3.6912e-5, 1.0832),
                      30: (2.3535e-5, 1.1099), 40: (1.7122e-5, 1.1060)},
    (0.5, 1.8, 1.7): {10: (3.1251e-5, None), 20: (1.0369e-5, 1.5917),
                      30: (5.5386e-6, 1.5465), 40: (3.5433e-6, 1.5527)},
    (0.1, 1.8, 1.7): {10: (2.0743e-5, None), 20: (5.5573e-6, 1.9002),
                      30: (2.5115e-6, 1.9588), 40: (1.4310e-6, 1.9552)},
}
