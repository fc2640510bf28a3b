// Copyright 2026 The cipherpdp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cipherpdp/sde.hpp"

#include <memory>

#include "cipherpdp/counters.hpp"
#include "cipherpdp/error.hpp"

namespace cipherpdp::sde {

namespace {

constexpr std::size_t kPrfKeyBytes = 32;
constexpr int kPrimalityReps = 40;

std::unique_ptr<Rng> make_rng(const std::optional<Bytes>& seed) {
  if (seed) return std::make_unique<DeterministicRng>(*seed);
  return std::make_unique<SystemRng>();
}

bool is_probable_prime(const BigInt& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), kPrimalityReps) > 0;
}

std::size_t bit_length(const BigInt& n) {
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

BigInt find_generator(const BigInt& p, const BigInt& q, Rng& rng) {
  BigInt cofactor = (p - 1) / q;
  for (int i = 0; i < 1000; ++i) {
    BigInt a = uniform_below(rng, p - 3) + 2;
    BigInt g = powm(a, cofactor, p);
    if (g != 1) return g;
  }
  fail(Errc::generation_failed, "no subgroup generator found");
}

}  // namespace

std::size_t PublicParams::digest_length() const {
  if (hash_id == kHashIdentity) return element_width();
  return 32;
}

bool KeyStore::insert(ServerKeySet key) {
  std::string id = key.user_id;
  return entries_.emplace(std::move(id), std::move(key)).second;
}

bool KeyStore::erase(const std::string& user_id) {
  return entries_.erase(user_id) > 0;
}

bool KeyStore::contains(const std::string& user_id) const {
  return entries_.count(user_id) > 0;
}

const ServerKeySet& KeyStore::at(const std::string& user_id) const {
  auto it = entries_.find(user_id);
  if (it == entries_.end())
    fail(Errc::user_not_found, "unknown user '" + user_id + "'");
  return it->second;
}

std::optional<Profile> parse_profile(std::string_view name) {
  if (name == "toy") return Profile::toy;
  if (name == "test") return Profile::test;
  if (name == "prod") return Profile::prod;
  return std::nullopt;
}

std::string_view to_string(Profile profile) {
  switch (profile) {
    case Profile::toy: return "toy";
    case Profile::test: return "test";
    case Profile::prod: return "prod";
  }
  return "prod";
}

InitOptions options_for(Profile profile) {
  InitOptions options;
  switch (profile) {
    case Profile::toy:
      options.p_bits = 5;
      options.q_bits = 4;
      options.hash_id = std::string(kHashIdentity);
      break;
    case Profile::test:
      options.p_bits = 1024;
      options.q_bits = 160;
      break;
    case Profile::prod:
      options.p_bits = 2048;
      options.q_bits = 256;
      break;
  }
  return options;
}

void validate(const PublicParams& params) {
  const auto& [p, q, g, h, hash_id, prf_id, bits] = params;
  if (p < 5 || q < 2)
    fail(Errc::invalid_argument, "group parameters too small");
  if (!is_probable_prime(p) || !is_probable_prime(q))
    fail(Errc::invalid_argument, "p and q must be prime");
  if (mod(p - 1, q) != 0) fail(Errc::invalid_argument, "q does not divide p-1");
  if (g <= 1 || g >= p || powm(g, q, p) != 1)
    fail(Errc::invalid_argument, "g does not generate the order-q subgroup");
  if (!in_group(params, h)) fail(Errc::invalid_argument, "h outside subgroup");
  if (hash_id != kHashSha256 && hash_id != kHashIdentity)
    fail(Errc::invalid_argument, "unsupported hash '" + hash_id + "'");
  if (prf_id != kPrfHmacSha256)
    fail(Errc::invalid_argument, "unsupported prf '" + prf_id + "'");
  (void)bits;
}

std::pair<PublicParams, MasterSecretKey> init_from_group(
    const BigInt& p, const BigInt& q, const BigInt& g, const BigInt& x,
    Bytes prf_key, std::string_view hash_id) {
  if (x < 1 || x >= q)
    fail(Errc::invalid_argument, "master exponent outside Z*_q");
  if (prf_key.empty()) fail(Errc::invalid_argument, "empty PRF key");
  PublicParams params;
  params.p = p;
  params.q = q;
  params.g = g;
  params.h = powm(g, x, p);
  params.hash_id = std::string(hash_id);
  params.security_bits = static_cast<unsigned>(bit_length(p));
  validate(params);
  return {params, MasterSecretKey{x, std::move(prf_key)}};
}

std::pair<PublicParams, MasterSecretKey> init(const InitOptions& options) {
  if (options.p_bits < 5 || options.q_bits < 2 ||
      options.q_bits >= options.p_bits)
    fail(Errc::invalid_argument, "unsupported group sizes");
  auto rng = make_rng(options.seed);

  if (options.p_bits < 8) {
    // The toy group is fixed; only the secrets are drawn.
    BigInt q = 11;
    BigInt x = uniform_nonzero_below(*rng, q);
    return init_from_group(23, q, 2, x, random_bytes(*rng, kPrfKeyBytes),
                           options.hash_id);
  }

  BigInt q;
  unsigned attempts = 0;
  for (;;) {
    if (++attempts > options.max_attempts)
      fail(Errc::generation_failed, "could not generate q");
    BigInt candidate = uniform_bits(*rng, options.q_bits);
    mpz_nextprime(q.get_mpz_t(), candidate.get_mpz_t());
    if (bit_length(q) == options.q_bits) break;
  }

  BigInt p;
  unsigned cofactor_bits = options.p_bits - options.q_bits;
  attempts = 0;
  for (;;) {
    if (++attempts > options.max_attempts)
      fail(Errc::generation_failed, "could not generate p");
    BigInt k = uniform_bits(*rng, cofactor_bits);
    if (mpz_odd_p(k.get_mpz_t())) k -= 1;  // p = kq + 1 must be odd
    p = k * q + 1;
    if (bit_length(p) != options.p_bits) continue;
    if (is_probable_prime(p)) break;
  }

  BigInt g = find_generator(p, q, *rng);
  BigInt x = uniform_nonzero_below(*rng, q);
  return init_from_group(p, q, g, x, random_bytes(*rng, kPrfKeyBytes),
                         options.hash_id);
}

std::pair<PublicParams, MasterSecretKey> init(Profile profile,
                                              std::optional<Bytes> seed) {
  InitOptions options = options_for(profile);
  options.seed = std::move(seed);
  return init(options);
}

std::pair<ClientKeySet, ServerKeySet> keygen(const MasterSecretKey& msk,
                                             const PublicParams& params,
                                             const std::string& user_id,
                                             Rng& rng) {
  if (user_id.empty()) fail(Errc::invalid_argument, "empty user id");
  BigInt x1 = uniform_nonzero_below(rng, params.q);
  BigInt x2 = mod(msk.x - x1, params.q);
  return {ClientKeySet{user_id, x1, msk.s}, ServerKeySet{user_id, x2}};
}

BigInt element_exponent(const PublicParams& params,
                        std::span<const std::uint8_t> prf_key,
                        std::string_view element) {
  if (element.empty()) fail(Errc::invalid_argument, "empty element");
  Bytes input(element.begin(), element.end());
  for (unsigned counter = 0;; ++counter) {
    if (counter > 0) {
      if (counter == 1) input.push_back(0);
      input.back() = static_cast<std::uint8_t>(counter);
    }
    auto digest = hmac_sha256(prf_key, input);
    BigInt sigma = mod(bigint_from_bytes(digest), params.q);
    if (sgn(sigma) != 0) return sigma;
    if (counter == 255)
      fail(Errc::generation_failed, "PRF kept mapping to zero");
  }
}

Bytes hash_group_element(const PublicParams& params, const BigInt& z) {
  Bytes encoded = to_fixed_bytes(z, params.element_width());
  if (params.hash_id == kHashIdentity) return encoded;
  auto digest = sha256(encoded);
  return Bytes(digest.begin(), digest.end());
}

bool in_group(const PublicParams& params, const BigInt& z) {
  return z >= 1 && z < params.p && powm(z, params.q, params.p) == 1;
}

ClientEncryptedElement client_enc_with(const BigInt& sigma, const BigInt& r,
                                       const ClientKeySet& key,
                                       const PublicParams& params) {
  ++thread_op_counts().client_enc;
  ClientEncryptedElement out;
  out.c1_hat = powm(params.g, mod(r + sigma, params.q), params.p);
  out.c2_hat = powm(out.c1_hat, key.x1, params.p);
  out.c3_hat = hash_group_element(params, powm(params.h, r, params.p));
  return out;
}

ClientEncryptedElement client_enc(std::string_view element,
                                  const ClientKeySet& key,
                                  const PublicParams& params, Rng& rng) {
  BigInt sigma = element_exponent(params, key.s, element);
  BigInt r = uniform_nonzero_below(rng, params.q);
  return client_enc_with(sigma, r, key, params);
}

ServerEncryptedElement server_reenc(const ClientEncryptedElement& c,
                                    const ServerKeySet& key,
                                    const PublicParams& params) {
  ++thread_op_counts().server_reenc;
  ServerEncryptedElement out;
  out.c1 = mod(powm(c.c1_hat, key.x2, params.p) * c.c2_hat, params.p);
  out.c2 = c.c3_hat;
  return out;
}

ClientTrapdoor client_td_with(const BigInt& sigma, const BigInt& r,
                              const ClientKeySet& key,
                              const PublicParams& params) {
  ++thread_op_counts().client_td;
  ClientTrapdoor out;
  BigInt diff = mod(sigma - r, params.q);
  out.t1 = powm(params.g, diff, params.p);
  // h^r g^{-x1 r} g^{x1 sigma}; the x2 share never reaches the client.
  out.t2 = mod(powm(params.h, r, params.p) *
                   powm(params.g, mod(key.x1 * diff, params.q), params.p),
               params.p);
  return out;
}

ClientTrapdoor client_td(std::string_view element, const ClientKeySet& key,
                         const PublicParams& params, Rng& rng) {
  BigInt sigma = element_exponent(params, key.s, element);
  BigInt r = uniform_nonzero_below(rng, params.q);
  return client_td_with(sigma, r, key, params);
}

ServerTrapdoor server_td(const ClientTrapdoor& td, const ServerKeySet& key,
                         const PublicParams& params) {
  ++thread_op_counts().server_td;
  return {mod(powm(td.t1, key.x2, params.p) * td.t2, params.p)};
}

bool match(const ServerEncryptedElement& c, const ServerTrapdoor& t,
           const PublicParams& params) {
  ++thread_op_counts().match;
  if (sgn(t.t) <= 0 || t.t >= params.p) return false;
  BigInt blinded = mod(c.c1 * invert(t.t, params.p), params.p);
  return hash_group_element(params, blinded) == c.c2;
}

}  // namespace cipherpdp::sde
