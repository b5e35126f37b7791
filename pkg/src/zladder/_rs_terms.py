"""Chebyshev coefficient tables for the Riemann-Siegel remainder terms.

Each table holds the Chebyshev-series coefficients (on p in [0, 1]) of one
correction-term function C_j(p) of the Riemann-Siegel formula,

    C0(p) = Psi(p) = cos(2*pi*(p^2 - p - 1/16)) / cos(2*pi*p),
    C1(p) = -Psi'''(p) / (96 pi^2),
    C2(p) = Psi''(p)/(64 pi^2) + Psi^(6)(p)/(18432 pi^4),
    C3(p) = -Psi'(p)/(64 pi^2) - Psi^(5)(p)/(3840 pi^4) - Psi^(9)(p)/(5308416 pi^6),

with the removable singularities of the quotient (p = 1/4, 3/4) already
resolved: the tables approximate the entire continuations to ~1e-16, so no
runtime division by cos(2*pi*p) ever happens.  Fitted at degree 50 from
40-digit evaluations of the derivatives via Cauchy-circle differentiation;
the combination formulas were cross-validated against the empirical
remainder of the Riemann-Siegel expansion over N = 30..480.
"""

import numpy as np

C0_CHEB = np.array([
    0.6426672862397684,
    8.719627590204779e-47,
    0.27197299999785507,
    -1.6498442002457105e-46,
    0.010738605819340285,
    2.087749970347216e-46,
    -0.0013743815296336614,
    2.445258977969148e-46,
    -0.00012468221880320676,
    -2.5196687474981147e-46,
    -5.764599706783048e-07,
    7.295578552667657e-47,
    2.728067429580452e-07,
    -1.7054377062156282e-46,
    8.07795305950047e-09,
    -1.281216491429795e-46,
    -2.0884608068869654e-10,
    -5.837318126841355e-47,
    -1.3115561854739528e-11,
    2.8138866867850636e-47,
    -1.4207987228087186e-14,
    6.406082457148975e-47,
    1.0271701357931162e-14,
    1.9680101113350855e-46,
    1.3974598819518373e-16,
    2.7009891054307692e-46,
    -4.4841187339522885e-18,
    -2.3742703472690992e-46,
    -1.1830599573845289e-19,
    8.561399919367321e-47,
    9.389869560399935e-22,
    4.729724430979149e-47,
    5.601822847320697e-23,
    3.010602169447849e-47,
    1.0023543875614807e-25,
    -5.110326125696278e-47,
    -1.7592985581293886e-26,
    7.364001329246017e-47,
    -1.4854553062733663e-28,
    5.123155396304721e-47,
    3.808760801084831e-30,
    -4.785317936949067e-47,
    5.901183139529739e-32,
    -4.603569936662798e-46,
    -5.36440658895861e-34,
    -7.115968764149462e-47,
    -1.507922896626611e-35,
    -4.208856044276382e-46,
    2.9737477711877364e-38,
    6.541217440891236e-46,
    2.8310614615057003e-39,
])

C1_CHEB = np.array([
    7.630743247313219e-49,
    0.010697913921003001,
    8.312298248386728e-49,
    0.017170651243377882,
    -4.169512947743825e-49,
    0.002793211149788471,
    -3.2073176521106348e-49,
    -3.6375653719275045e-05,
    3.3275920640647836e-49,
    -2.7108955231150888e-05,
    5.3882936555458664e-48,
    -1.0483749866752774e-06,
    1.3430642668213283e-49,
    5.886467166527572e-08,
    -1.421910825769048e-48,
    4.322967268502779e-09,
    2.0927747680021892e-48,
    -1.1369591588273712e-11,
    -4.2283137713658535e-48,
    -6.6998339103553274e-12,
    1.0577466340189864e-48,
    -1.0079997652808475e-13,
    3.555779351188905e-48,
    5.152488009222117e-15,
    1.0691058840368783e-47,
    1.521695447183697e-16,
    -8.534805910501904e-48,
    -1.8619464833687103e-18,
    5.817940582693187e-48,
    -1.1301846184246265e-19,
    6.207496039189124e-48,
    -9.650306476857104e-23,
    -1.1292430900139527e-48,
    5.2266106854276174e-23,
    3.862145006083223e-49,
    4.630049054611401e-25,
    -1.2305408725264469e-47,
    -1.6018105598830104e-26,
    1.0028881383443441e-47,
    -2.6582049781870995e-28,
    5.1423993022173844e-48,
    3.143992801354295e-30,
    4.743489169236124e-48,
    9.204745058485249e-32,
    -1.4269890787182233e-47,
    -2.73497259210936e-34,
    -4.3505927568525715e-48,
    -2.2657205956645378e-35,
    2.405488239082976e-49,
    -5.443030997861594e-38,
    -3.011671275331886e-47,
])

C2_CHEB = np.array([
    0.0031461158539889122,
    -3.3275920640647836e-49,
    -0.0023087838845307503,
    -7.684198541515062e-51,
    5.769820766689844e-05,
    4.506114253421061e-49,
    0.000352388620236659,
    3.3267568250928798e-49,
    2.5246667458684434e-05,
    -2.609286548227506e-49,
    -3.442821197193136e-06,
    -3.785303020668072e-49,
    -3.535074556622459e-07,
    -7.78442721814352e-49,
    3.730830183792625e-09,
    -3.1070889754821774e-49,
    1.2776951864116635e-09,
    -2.2718500035783663e-49,
    2.1874616204147057e-11,
    6.798845231297023e-49,
    -1.914141096461037e-12,
    1.1527968290216401e-48,
    -6.562883102168523e-14,
    2.1064726871414117e-49,
    1.2586009182411715e-15,
    -2.786357210271114e-49,
    8.140076623881463e-17,
    -1.8475486058512302e-49,
    -5.423874275488608e-20,
    -7.602345122268489e-49,
    -5.796980131086543e-20,
    7.911383541872899e-49,
    -5.382916503746397e-22,
    3.14049853435833e-50,
    2.6010080772383425e-23,
    -5.993674862381749e-49,
    4.666966774911328e-25,
    -2.3694059154967314e-48,
    -7.288849536075177e-27,
    -7.246533320237465e-49,
    -2.250096790723193e-28,
    -1.270899619648839e-48,
    9.737854958612028e-31,
    -2.0005643855040084e-48,
    7.414681256143464e-32,
    1.185204101131508e-48,
    1.5369645352187648e-34,
    -1.1798585717113236e-48,
    -1.7848849203399018e-35,
    1.1349227150228986e-48,
    -1.2518534861675616e-37,
])

C3_CHEB = np.array([
    3.7159030144925844e-47,
    7.123256221203874e-05,
    8.882983106305369e-48,
    0.00023234305298164808,
    -1.0821606691677348e-47,
    -0.00012929912045472474,
    -3.7958082388371923e-47,
    1.807449641367144e-05,
    -2.0916889573387142e-48,
    6.5261851872204395e-06,
    2.2780641815293307e-47,
    -1.1696365378521986e-07,
    2.344574260862031e-47,
    -7.349476126518126e-08,
    4.212924493308526e-48,
    -1.7750910077907072e-09,
    -3.1461447498083996e-47,
    2.555552961326525e-10,
    -9.474032134407739e-48,
    1.13766366005373e-11,
    -3.776324201720106e-48,
    -3.349863898530277e-13,
    3.0555087927722576e-47,
    -2.5537379354163893e-14,
    2.4750218834939684e-48,
    6.766500771321871e-17,
    -1.2529419817529071e-48,
    2.976888471991973e-17,
    -1.9922370529541274e-47,
    2.9952208087566915e-19,
    -2.6523848791777427e-48,
    -2.0461188497575094e-20,
    7.219012196113235e-48,
    -4.0869264533289925e-22,
    6.188661400372693e-48,
    8.447612109113922e-24,
    5.419322783352093e-48,
    2.8302694448256257e-25,
    -8.700266750836049e-48,
    -1.7162555945454355e-27,
    3.5377381893957825e-48,
    -1.2805512378156142e-28,
    -6.298129908127837e-48,
    -2.1396329633637818e-31,
    3.830489449048068e-48,
    4.1031107336108317e-32,
    -5.81426553121681e-48,
    2.997790259233988e-34,
    5.201638626299662e-48,
    -9.577795683539288e-36,
    3.8873274610861226e-48,
])

RS_TERM_TABLES = (C0_CHEB, C1_CHEB, C2_CHEB, C3_CHEB)
