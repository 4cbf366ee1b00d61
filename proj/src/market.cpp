#include "climkt/market.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "climkt/csv.hpp"
#include "climkt/error.hpp"

namespace climkt {

Ledger::Ledger(std::size_t n_traders, std::size_t n_securities, Ecu initial_cash)
    : n_securities_(n_securities),
      cash_(n_traders, initial_cash),
      holdings_(n_traders * n_securities, 0),
      bank_cash_(initial_cash * static_cast<std::int64_t>(n_traders)),
      bank_units_(n_securities, 0) {
  if (initial_cash < Ecu()) throw ConfigError("initial cash must be non-negative");
}

Ecu Ledger::total_cash() const {
  Ecu total;
  for (Ecu c : cash_) total += c;
  return total;
}

std::int64_t Ledger::total_units(std::size_t security) const {
  std::int64_t total = 0;
  for (std::size_t id = 0; id < cash_.size(); ++id) total += holdings_[id * n_securities_ + security];
  return total;
}

void Ledger::endow_complete_sets(std::int64_t units) {
  for (auto& h : holdings_) h += units;
  for (auto& b : bank_units_) b += units * static_cast<std::int64_t>(cash_.size());
}

std::vector<Ecu> Ledger::settle(std::size_t winning_security) {
  std::vector<Ecu> payouts(cash_.size());
  for (std::size_t id = 0; id < cash_.size(); ++id) {
    payouts[id] = Ecu::units(holdings_[id * n_securities_ + winning_security]);
    cash_[id] += payouts[id];
    bank_cash_ += payouts[id];
  }
  std::fill(holdings_.begin(), holdings_.end(), 0);
  std::fill(bank_units_.begin(), bank_units_.end(), 0);
  return payouts;
}

bool Ledger::transfer(TraderId buyer, TraderId seller, std::size_t security, Ecu price) {
  if (buyer == seller || price < Ecu() || cash_[buyer] < price) return false;
  auto& seller_units = holdings_[seller * n_securities_ + security];
  if (seller_units < 1) return false;
  cash_[buyer] -= price;
  cash_[seller] += price;
  --seller_units;
  ++holdings_[buyer * n_securities_ + security];
  return true;
}

bool Ledger::non_negative() const {
  return std::all_of(cash_.begin(), cash_.end(), [](Ecu c) { return c >= Ecu(); }) &&
         std::all_of(holdings_.begin(), holdings_.end(), [](std::int64_t h) { return h >= 0; });
}

const char* to_string(OrderStatus s) {
  switch (s) {
    case OrderStatus::Accepted: return "accepted";
    case OrderStatus::InsufficientCash: return "insufficient cash";
    case OrderStatus::NoHolding: return "no holding";
    case OrderStatus::BadSecurity: return "bad security";
    case OrderStatus::BadPrice: return "bad price";
    case OrderStatus::WrongSide: return "wrong side";
    case OrderStatus::SelfCross: return "self cross";
  }
  return "unknown";
}

OrderBook::OrderBook(std::size_t n_securities) : bids_(n_securities), asks_(n_securities) {}

namespace {

OrderStatus validate(const Order& o, Side side, const Ledger& ledger, std::size_t n_securities) {
  if (o.side != side) return OrderStatus::WrongSide;
  if (o.security >= n_securities || o.trader >= ledger.trader_count()) return OrderStatus::BadSecurity;
  if (o.limit < Ecu() || o.limit > Ecu::units(1)) return OrderStatus::BadPrice;
  if (side == Side::Buy && ledger.cash(o.trader) < o.limit) return OrderStatus::InsufficientCash;
  if (side == Side::Sell && ledger.holding(o.trader, o.security) < 1) return OrderStatus::NoHolding;
  return OrderStatus::Accepted;
}

}  // namespace

OrderStatus OrderBook::process_buy(const Order& o, Ledger& ledger, int year, std::vector<Trade>& out) {
  auto& asks = asks_[o.security];
  bool own_cross = false;
  for (auto it = asks.begin(); it != asks.end() && it->price <= o.limit;) {
    if (it->trader == o.trader) {
      own_cross = true;
      ++it;
      continue;
    }
    if (!ledger.transfer(o.trader, it->trader, o.security, it->price)) {
      // The resting seller no longer holds the unit.
      it = asks.erase(it);
      continue;
    }
    out.push_back({o.trader, it->trader, o.security, it->price, year});
    asks.erase(it);
    return OrderStatus::Accepted;
  }
  if (own_cross) return OrderStatus::SelfCross;
  bids_[o.security].insert({o.limit, o.arrival_rank, o.trader});
  return OrderStatus::Accepted;
}

OrderStatus OrderBook::process_sell(const Order& o, Ledger& ledger, int year, std::vector<Trade>& out) {
  auto& bids = bids_[o.security];
  bool own_cross = false;
  for (auto it = bids.begin(); it != bids.end() && it->price >= o.limit;) {
    if (it->trader == o.trader) {
      own_cross = true;
      ++it;
      continue;
    }
    if (!ledger.transfer(it->trader, o.trader, o.security, it->price)) {
      // The resting buyer can no longer pay.
      it = bids.erase(it);
      continue;
    }
    out.push_back({it->trader, o.trader, o.security, it->price, year});
    bids.erase(it);
    return OrderStatus::Accepted;
  }
  if (own_cross) return OrderStatus::SelfCross;
  asks_[o.security].insert({o.limit, o.arrival_rank, o.trader});
  return OrderStatus::Accepted;
}

ArrivalResult OrderBook::submit_arrival(const std::optional<Order>& buy, const std::optional<Order>& sell,
                                        Ledger& ledger, int year) {
  ArrivalResult r;
  if (buy) {
    r.buy = validate(*buy, Side::Buy, ledger, bids_.size());
    if (r.buy == OrderStatus::Accepted) r.buy = process_buy(*buy, ledger, year, r.trades);
  }
  if (sell) {
    r.sell = validate(*sell, Side::Sell, ledger, asks_.size());
    if (r.sell == OrderStatus::Accepted) r.sell = process_sell(*sell, ledger, year, r.trades);
  }
  return r;
}

void OrderBook::end_period() {
  for (auto& b : bids_) b.clear();
  for (auto& a : asks_) a.clear();
}

std::size_t OrderBook::resting_count() const {
  std::size_t n = 0;
  for (const auto& b : bids_) n += b.size();
  for (const auto& a : asks_) n += a.size();
  return n;
}

std::optional<Ecu> OrderBook::best_bid(std::size_t security) const {
  const auto& b = bids_.at(security);
  if (b.empty()) return std::nullopt;
  return b.begin()->price;
}

std::optional<Ecu> OrderBook::best_ask(std::size_t security) const {
  const auto& a = asks_.at(security);
  if (a.empty()) return std::nullopt;
  return a.begin()->price;
}

bool OrderBook::uncrossed() const {
  for (std::size_t s = 0; s < bids_.size(); ++s) {
    const auto bid = best_bid(s);
    const auto ask = best_ask(s);
    if (bid && ask && !(*bid < *ask)) return false;
  }
  return true;
}

std::vector<Ecu> settle_sequence(Ledger& ledger, const SecuritySet& securities, double realized_temperature) {
  if (!std::isfinite(realized_temperature)) throw DomainError("realized temperature must be finite");
  if (ledger.security_count() != securities.bin_count())
    throw ConfigError("ledger and security set disagree on the number of bins");
  return ledger.settle(securities.bin_of(realized_temperature));
}

void write_trade_log_csv(std::ostream& out, std::span<const Trade> trades) {
  out << "year,buyer,seller,bin,price\n";
  for (const Trade& t : trades)
    out << t.year << ',' << t.buyer << ',' << t.seller << ',' << t.security << ','
        << csv::format_double(t.price.to_double()) << '\n';
}

}  // namespace climkt
