"""Embedded orthonormal wavelet filter tables and accessors.

Decomposition low-pass tables are literals (generated once by
scripts/derive_wavelet_filters.py); the high-pass and reconstruction
filters are derived from them by the quadrature-mirror relations.
"""

from dataclasses import dataclass

import numpy as np

# Decomposition low-pass coefficients, normalized to sum sqrt(2).
_DEC_LO = {
    "haar": [
        0.70710678118654752,
        0.70710678118654752,
    ],
    "db5": [
        0.16010239797419291,
        0.60382926979718967,
        0.72430852843777293,
        0.13842814590132073,
        -0.24229488706638203,
        -0.032244869584638375,
        0.077571493840045714,
        -0.0062414902127982743,
        -0.012580751999081999,
        0.0033357252854737713,
    ],
    "db10": [
        0.026670057900555554,
        0.18817680007769149,
        0.52720118893172559,
        0.68845903945360357,
        0.28117234366057746,
        -0.24984642432731538,
        -0.19594627437737704,
        0.12736934033579326,
        0.093057364603572351,
        -0.071394147166397087,
        -0.029457536821875813,
        0.033212674059341002,
        0.0036065535669561697,
        -0.010733175483330575,
        0.0013953517470529012,
        0.0019924052951850561,
        -0.00068585669495971163,
        -0.00011646685512928545,
        9.3588670320069591e-5,
        -1.3264202894521245e-5,
    ],
    "db15": [
        0.0045385373615788989,
        0.046743394892766272,
        0.20602386398699573,
        0.49263177170813962,
        0.64581314035742436,
        0.33900253545473153,
        -0.19320413960914543,
        -0.28888259656696565,
        0.065282952848772817,
        0.19014671400712298,
        -0.039666176555790944,
        -0.11112093603723169,
        0.033877143923507686,
        0.054780550584507613,
        -0.025767007328439963,
        -0.020810050169693082,
        0.015083918027835902,
        0.0051010003604075432,
        -0.006487734560315745,
        -0.00024175649076162428,
        0.0019433239803822115,
        -0.00037348235413761699,
        -0.00035956524436246881,
        0.00015589648992059975,
        2.5792699155318937e-5,
        -2.8133296266047814e-5,
        3.3629871817375798e-6,
        1.8112704079405771e-6,
        -6.3168823258816644e-7,
        6.133359913305752e-8,
    ],
    "sym5": [
        0.027333068344998769,
        0.029519490925706261,
        -0.039134249302313844,
        0.1993975339768556,
        0.72340769040404079,
        0.63397896345679206,
        0.016602105764510848,
        -0.17532808990805622,
        -0.021101834024689041,
        0.019538882735249827,
    ],
    "sym10": [
        -0.0019882883686792473,
        -0.0043412369374401634,
        0.012700475419076335,
        0.030511026911256156,
        -0.040242888077662327,
        -0.082188059832501943,
        0.24488259585257725,
        0.72045018857694927,
        0.61481933227966341,
        0.046621375170575055,
        -0.16495157677310635,
        0.0081556833047109422,
        0.056917841469269379,
        -0.0189121087961115,
        -0.01880702601022112,
        0.0084255008518177171,
        0.0041647875200682386,
        -0.0017935084613655653,
        -0.00038847212443803989,
        0.00017792039865755842,
    ],
    "sym15": [
        1.7679846216839231e-6,
        -7.0493712884764413e-6,
        -1.963222612186714e-5,
        0.00010531571329728707,
        7.3864659398641445e-5,
        -0.00072903916572724361,
        7.1751263345133136e-5,
        0.0031203952125390178,
        -0.0019861402756847576,
        -0.0093488448887453779,
        0.010592028441865141,
        0.021843365527656375,
        -0.03345735949722273,
        -0.042839396095635937,
        0.065866130249161543,
        0.039226122802953103,
        -0.15673371193135789,
        -0.01552387642956031,
        0.52808820609680799,
        0.74323827160860234,
        0.35020551179753482,
        -0.054439242342216226,
        -0.084923038274017174,
        0.020004532469413765,
        0.033710087430784234,
        0.0029515251305675518,
        -0.0050104649788767546,
        -0.00065274652629451101,
        0.00062778044630950385,
        0.00015744754098616263,
    ],
    "coif3": [
        -0.0037935128643808017,
        0.0077825964256727458,
        0.023452696142077166,
        -0.065771911281469367,
        -0.061123390002972541,
        0.4051769024091182,
        0.79377722262608717,
        0.42848347637736998,
        -0.071799821619154834,
        -0.082301927106299818,
        0.034555027573297733,
        0.015880544863669451,
        -0.0090079761367306239,
        -0.002574517688136797,
        0.0011175187708306302,
        0.00046621695982040287,
        -7.0983302506379006e-5,
        -3.4599773197272774e-5,
    ],
    "coif4": [
        0.00089231390253700296,
        -0.0016294924252267858,
        -0.0073461679362680498,
        0.016068947131575027,
        0.026682304669604833,
        -0.081266710249193723,
        -0.056077319603569256,
        0.41530842700068227,
        0.78223893442428259,
        0.43438603311435654,
        -0.066627472366817157,
        -0.096220424535952637,
        0.039334422605589146,
        0.025082253337949607,
        -0.015211728187697212,
        -0.0056582838001308837,
        0.0037514346971460863,
        0.0012665610789256602,
        -0.00058902022463321648,
        -0.0002599743371222568,
        6.2338854312787181e-5,
        3.1229861599195265e-5,
        -3.2596479400307507e-6,
        -1.7849909144933467e-6,
    ],
}

FAMILIES = tuple(_DEC_LO)


@dataclass(frozen=True)
class WaveletFilter:
    """Orthonormal analysis/synthesis filter bank for one wavelet family."""

    family: str
    h: np.ndarray    # decomposition low-pass
    g: np.ndarray    # decomposition high-pass
    h_r: np.ndarray  # reconstruction low-pass
    g_r: np.ndarray  # reconstruction high-pass

    def __len__(self):
        return len(self.h)


def wavelet_filters(family: str) -> WaveletFilter:
    """Return the filter bank for one of the supported families.

    g is the quadrature mirror g[k] = (-1)^k h[L-1-k]; reconstruction
    filters are the time-reversed decomposition pair.
    """
    try:
        h = np.array(_DEC_LO[family], dtype=np.float64)
    except KeyError:
        raise ValueError(
            f"unknown wavelet family {family!r}; supported: {', '.join(FAMILIES)}"
        ) from None
    L = len(h)
    signs = np.where(np.arange(L) % 2 == 0, 1.0, -1.0)
    g = signs * h[::-1]
    return WaveletFilter(family=family, h=h, g=g, h_r=h[::-1].copy(), g_r=g[::-1].copy())
