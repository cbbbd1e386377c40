"""
Exact bias oracles on discrete models, for fixed (non random) fits.

The first order bias is quadratic in the errors of the nuisances:

    chi(eta_hat) - chi(eta) + P chi1_eta_hat = int (a_hat - a)(b_hat - b) stilde_1 f

and does not involve f_hat. The second order correction with a projection kernel built in
L2(w), w = stilde_1 f, leaves the representation bias <(I - Pi_k)(a_hat - a), (I - Pi_k)(b_hat - b)>_w.
"""

import numpy as np

from pyHOIF.basis.projection import ProjectionKernel, WeightMeasure, project_function
from pyHOIF.common import functions
from pyHOIF.estimators import second_order
from pyHOIF.models import discrete, model
from pyHOIF.nuisance.fit import NuisanceFit


def fixed_fit(dmodel, a_hat, b_hat, f_hat=None, w_hat=None):
    """
    A fixed fit on the support of a discrete model
    :param dmodel: DiscreteModel
    :param a_hat: values of a_hat on the atoms
    :param b_hat: values of b_hat on the atoms
    :param f_hat: values of f_hat on the atoms, default the true f
    :param w_hat: values of w_hat on the atoms, default the true weight stilde_1 f
    :return: NuisanceFit
    """
    f_hat = dmodel.f if f_hat is None else f_hat
    w_hat = dmodel.weight() if w_hat is None else w_hat
    return NuisanceFit(functions.AtomFunction(a_hat), functions.AtomFunction(b_hat), functions.as_function(f_hat),
                       functions.as_function(w_hat), domain=dmodel.domain, meta={'mode': 'fixed'})


def _errors(dmodel, fit):
    return fit.a_hat - dmodel.params.a, fit.b_hat - dmodel.params.b


def _enumerated_first_order(dmodel, fit):
    kind = dmodel.kind
    chi_hat = model.functional_chi(fit.params(kind), domain=dmodel.domain)
    mean_if = discrete.exact_expectation(dmodel, lambda x: model.first_order_if(kind, fit, chi_hat, x), order=1)
    return chi_hat + mean_if - dmodel.chi()


def exact_bias_first_order(dmodel, fit):
    """
    Exact bias of the first order estimator for a fixed fit
    :param dmodel: DiscreteModel
    :param fit: NuisanceFit (or any object with evaluable a_hat, b_hat, f_hat)
    :return: tuple (bias_enumerated, bias_formula)
    """
    da, db = _errors(dmodel, fit)
    w = dmodel.weight()
    formula = dmodel.domain.integrate(da * db * w)
    return _enumerated_first_order(dmodel, fit), formula


def true_projection_kernel(dmodel, basis):
    """Projection kernel of a basis in L2(w) for the true weight w = stilde_1 f"""
    return ProjectionKernel(basis, WeightMeasure(dmodel.weight(), dmodel.domain, name='w'), dmodel.domain)


def exact_second_order_bias(dmodel, fit, pk):
    """Exact bias of the second order estimator, by enumeration, for any projection kernel"""
    kernel = second_order.build_second_order_kernel(fit, dmodel.kind, pk)
    return _enumerated_first_order(dmodel, fit) + discrete.exact_expectation(dmodel, kernel, order=2)


def exact_bias_second_order(dmodel, fit, pk):
    """
    Exact bias of the second order estimator for a fixed fit and a projection kernel built in
    L2 of the true weight
    :param dmodel: DiscreteModel
    :param fit: NuisanceFit
    :param pk: ProjectionKernel with weight stilde_1 f
    :return: tuple (bias_enumerated, bias_formula), the formula being the representation bias
             <(I - Pi_k)(a_hat - a), (I - Pi_k)(b_hat - b)>_w
    """
    da, db = _errors(dmodel, fit)
    ra = da - project_function(pk, da)[1]
    rb = db - project_function(pk, db)[1]
    formula = dmodel.domain.integrate(ra * rb * dmodel.weight())
    return exact_second_order_bias(dmodel, fit, pk), formula


def weight_perturbation_sweep(dmodel, fit, basis, direction, deltas):
    """
    Exact second order bias when the projection kernel is built with the perturbed weight
    w + delta h, for each delta
    :param dmodel: DiscreteModel
    :param fit: NuisanceFit
    :param basis: truncation BasisSystem
    :param direction: values of h on the atoms
    :param deltas: perturbation sizes
    :return: list of (delta, exact second order bias)
    """
    w = np.asarray(dmodel.weight().table)
    h = np.asarray(direction, dtype=float)
    sweep = []
    for delta in deltas:
        weight = WeightMeasure(functions.AtomFunction(w + delta * h), dmodel.domain, name='w + delta h')
        pk = ProjectionKernel(basis, weight, dmodel.domain)
        sweep.append((delta, exact_second_order_bias(dmodel, fit, pk)))
    return sweep
