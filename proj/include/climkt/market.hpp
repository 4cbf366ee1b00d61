#pragma once

#include <compare>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "climkt/securities.hpp"

namespace climkt {

using TraderId = std::uint32_t;

// Experimental currency units held as integer nano-ECU so that transfers
// conserve value exactly.
class Ecu {
 public:
  static constexpr std::int64_t kScale = 1'000'000'000;

  constexpr Ecu() = default;
  static constexpr Ecu from_nanos(std::int64_t n) { return Ecu(n); }
  static Ecu from_double(double ecu) { return Ecu(std::llround(ecu * static_cast<double>(kScale))); }
  static constexpr Ecu units(std::int64_t whole) { return Ecu(whole * kScale); }

  constexpr std::int64_t nanos() const { return nanos_; }
  constexpr double to_double() const { return static_cast<double>(nanos_) / static_cast<double>(kScale); }

  constexpr Ecu& operator+=(Ecu o) { nanos_ += o.nanos_; return *this; }
  constexpr Ecu& operator-=(Ecu o) { nanos_ -= o.nanos_; return *this; }
  friend constexpr Ecu operator+(Ecu a, Ecu b) { return a += b; }
  friend constexpr Ecu operator-(Ecu a, Ecu b) { return a -= b; }
  friend constexpr Ecu operator*(Ecu a, std::int64_t n) { return Ecu(a.nanos_ * n); }
  friend constexpr auto operator<=>(Ecu, Ecu) = default;

 private:
  constexpr explicit Ecu(std::int64_t n) : nanos_(n) {}
  std::int64_t nanos_ = 0;
};

enum class Side { Buy, Sell };

struct Order {
  TraderId trader = 0;
  std::size_t security = 0;
  Side side = Side::Buy;
  Ecu limit;
  std::uint64_t arrival_rank = 0;
};

struct Trade {
  TraderId buyer = 0;
  TraderId seller = 0;
  std::size_t security = 0;
  Ecu price;
  int year = 0;

  friend bool operator==(const Trade&, const Trade&) = default;
};

// Cash and holdings for every trader. Only the bank (endowment, settlement)
// changes totals; trades move value between accounts.
class Ledger {
 public:
  static constexpr Ecu kInitialCash = Ecu::units(1);

  Ledger(std::size_t n_traders, std::size_t n_securities, Ecu initial_cash = kInitialCash);

  std::size_t trader_count() const { return cash_.size(); }
  std::size_t security_count() const { return n_securities_; }

  Ecu cash(TraderId id) const { return cash_[id]; }
  std::span<const Ecu> cash() const { return cash_; }
  std::int64_t holding(TraderId id, std::size_t security) const { return holdings_[id * n_securities_ + security]; }
  std::span<const std::int64_t> holdings(TraderId id) const {
    return {holdings_.data() + id * n_securities_, n_securities_};
  }

  Ecu total_cash() const;
  std::int64_t total_units(std::size_t security) const;

  // Bank issues `units` of every security to every trader.
  void endow_complete_sets(std::int64_t units = 1);
  // Bank pays 1 ECU per unit of the winning security, then all holdings expire.
  std::vector<Ecu> settle(std::size_t winning_security);

  // Net cash the bank has put into accounts since construction.
  Ecu bank_cash_flow() const { return bank_cash_; }
  // Net units of each security the bank has issued and not yet retired.
  std::int64_t bank_units(std::size_t security) const { return bank_units_[security]; }

  // Buyer pays price, seller delivers one unit. Fails without effect if
  // either side cannot cover it.
  bool transfer(TraderId buyer, TraderId seller, std::size_t security, Ecu price);

  bool non_negative() const;

 private:
  std::size_t n_securities_;
  std::vector<Ecu> cash_;
  std::vector<std::int64_t> holdings_;
  Ecu bank_cash_;
  std::vector<std::int64_t> bank_units_;
};

enum class OrderStatus { Accepted, InsufficientCash, NoHolding, BadSecurity, BadPrice, WrongSide, SelfCross };

const char* to_string(OrderStatus s);

struct ArrivalResult {
  std::vector<Trade> trades;
  OrderStatus buy = OrderStatus::Accepted;
  OrderStatus sell = OrderStatus::Accepted;
};

// Per-security limit order book for a continuous double auction with
// price-time priority. Incoming orders execute one unit at the resting price.
class OrderBook {
 public:
  explicit OrderBook(std::size_t n_securities);

  // Processes one trader's arrival: the buy order first, then the sell order.
  // A rejected order leaves book and ledger untouched. An order that would only
  // cross the same trader's resting order is dropped with SelfCross.
  ArrivalResult submit_arrival(const std::optional<Order>& buy, const std::optional<Order>& sell, Ledger& ledger,
                               int year);

  // Removes every resting order.
  void end_period();

  std::size_t security_count() const { return bids_.size(); }
  std::size_t resting_count() const;
  bool empty() const { return resting_count() == 0; }
  std::optional<Ecu> best_bid(std::size_t security) const;
  std::optional<Ecu> best_ask(std::size_t security) const;
  // Best bid strictly below best ask for every security that has both.
  bool uncrossed() const;

 private:
  struct Resting {
    Ecu price;
    std::uint64_t rank;
    TraderId trader;
  };
  struct BidOrder {
    bool operator()(const Resting& a, const Resting& b) const {
      return a.price != b.price ? a.price > b.price : a.rank < b.rank;
    }
  };
  struct AskOrder {
    bool operator()(const Resting& a, const Resting& b) const {
      return a.price != b.price ? a.price < b.price : a.rank < b.rank;
    }
  };

  OrderStatus process_buy(const Order& o, Ledger& ledger, int year, std::vector<Trade>& out);
  OrderStatus process_sell(const Order& o, Ledger& ledger, int year, std::vector<Trade>& out);

  std::vector<std::set<Resting, BidOrder>> bids_;
  std::vector<std::set<Resting, AskOrder>> asks_;
};

// Pays out the bin containing the realized temperature and expires all holdings.
std::vector<Ecu> settle_sequence(Ledger& ledger, const SecuritySet& securities, double realized_temperature);

// `year,buyer,seller,bin,price`
void write_trade_log_csv(std::ostream& out, std::span<const Trade> trades);

}  // namespace climkt
