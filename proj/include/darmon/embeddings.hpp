#ifndef DARMON_EMBEDDINGS_HPP_
#define DARMON_EMBEDDINGS_HPP_

/* Oriented optimal embeddings of O_c into the Eichler order R(M) of
 * upper triangular mod M integral matrices.
 *
 * An embedding is determined by the image W of omega_c = (t0 + sqrt D)/2.
 * Writing W = [[a, b], [C, d]], its fixed-point form is (C, d - a, -b), a
 * primitive form of discriminant D; the embedding is optimal exactly
 * when this form is primitive, and oriented when a reduces to the fixed
 * root o_q of x^2 - t0 x + n0 at every q | M. */

#include "darmon/intmat.hpp"
#include "darmon/quad.hpp"

#include <utility>
#include <vector>

namespace darmon {

struct Orientation {
    std::vector<std::pair<long, long>> roots;   /* (q, o_q) for q | M */
    long o_M = 0;                                /* the Hensel/CRT lift mod M */
};

/* the smallest root mod q at each q | M, lifted mod M; checks the
 * Heegner condition and gcd(c, M delta_K) = 1 */
Orientation fixed_orientation(QuadOrder const & O, long M);

struct OrientedEmbedding {
    QuadOrder order;
    long M = 1;
    M2 W;                   /* image of omega_c */
    Form form;              /* (C, d - a, -b) */
    M2 gamma;               /* image of eps_c */

    /* fixed point with W (z, 1)^t = omega_c (z, 1)^t, in K written over
     * sqrt(delta_K) */
    QuadNumber z() const;
    /* image of x + y sqrt(delta_K) */
    M2 image(mpq_class const & x, mpq_class const & y) const;
};

OrientedEmbedding embedding_from_form(QuadOrder const & O, long M, Form const & f);

/* a form in the given class with M | A and B = t0 - 2 o_M mod 2M */
Form heegner_form_in_class(NarrowClassGroup const & G, long M, Orientation const & o, std::size_t cls);

/* the Pic+ class F([psi]) */
std::size_t embedding_class(NarrowClassGroup const & G, OrientedEmbedding const & e);

/* validity: trace, determinant, level, optimality, orientation */
bool is_oriented_optimal(OrientedEmbedding const & e, Orientation const & o);

OrientedEmbedding star_involution(OrientedEmbedding const & e);

/* the family psi_sigma, indexed by class-group index sigma, with
 * F([psi_sigma]) = F([psi_0]) * sigma */
class EmbeddingFamily {
  public:
    EmbeddingFamily(QuadOrder const & O, long M);

    QuadOrder order;
    long M;
    NarrowClassGroup G;
    Orientation orient;
    QuadUnit eps;
    std::size_t base_class = 0;      /* F([psi_0]) */
    std::vector<OrientedEmbedding> psi;

    OrientedEmbedding const & operator[](std::size_t sigma) const { return psi[sigma]; }
    std::size_t size() const { return psi.size(); }
    /* psi^a: the embedding in class F([psi]) * a */
    OrientedEmbedding pic_action(OrientedEmbedding const & e, std::size_t a) const;
    /* the sigma with psi ~ psi_sigma */
    std::size_t index_of(OrientedEmbedding const & e) const;
};

/* one embedding per Gamma_0(M)-conjugacy class */
std::vector<OrientedEmbedding> enumerate_embeddings(QuadOrder const & O, long M);

} // namespace darmon

#endif /* DARMON_EMBEDDINGS_HPP_ */
